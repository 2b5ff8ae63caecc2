// Small shared utilities: exact rational gamma parsing, robust line fits,
// finite-difference weights on arbitrary nodes, and CSV emission helpers.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace imploslab {

using real = long double;

// A numeric certificate (invariant region, outgoing speeds, barrier sign,
// census agreement, ...) failed at runtime. Distinct from std::logic_error,
// which marks internal inconsistencies such as dual-route disagreements.
struct CertificateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parse "5/3", "1.4", or "2" into an exact rational (num, den) plus its
// long double value. Throws std::invalid_argument on malformed input or den=0.
struct Rational64 {
    std::int64_t num = 0;
    std::int64_t den = 1;
    real value() const { return static_cast<real>(num) / static_cast<real>(den); }
};
Rational64 parse_rational(const std::string& text);

// Theil-Sen affine fit y ~ intercept + slope*x: slope is the median of all
// pairwise slopes, intercept the median of y_i - slope*x_i. Robust against
// a small fraction of contaminated points.
struct LineFit {
    real slope = 0;
    real intercept = 0;
};
LineFit theil_sen(const std::vector<real>& x, const std::vector<real>& y);

// Ordinary least squares for y ~ c0 + c1 x (used where bias, not outliers,
// is the concern).
LineFit least_squares_line(const std::vector<real>& x, const std::vector<real>& y);

// Finite-difference weights for the m-th derivative at point z from the
// given nodes (Fornberg's recurrence). nodes.size() >= m+1.
std::vector<real> fd_weights(real z, const std::vector<real>& nodes, int m);

// Least-squares polynomial fit in the powers given by `exponents` of x
// (e.g. {0,2,4} fits a + b x^2 + c x^4). Returns coefficients aligned with
// `exponents`, and reports the condition number of the scaled normal matrix.
struct PolyFit {
    std::vector<real> coeffs;
    real cond = 0;
};
PolyFit fit_poly_powers(const std::vector<real>& x, const std::vector<real>& y,
                        const std::vector<int>& exponents);

real median(std::vector<real> v);

// Writes rows of numeric columns with a header line. Values are printed
// with enough digits to round-trip a double.
class CsvWriter {
  public:
    // A nonempty schema tag is written as a leading "# schema=..." comment so
    // downstream readers can detect format drift.
    explicit CsvWriter(const std::string& path, const std::vector<std::string>& columns,
                       const std::string& schema = "");
    void row(const std::vector<real>& values);
    ~CsvWriter();

  private:
    void* stream_;  // FILE*, kept opaque to avoid <cstdio> in every consumer
};

}  // namespace imploslab
