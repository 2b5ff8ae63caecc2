#include "imploslab/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace imploslab {

Rational64 parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational");
    auto slash = text.find('/');
    auto parse_int = [](const std::string& s) -> std::int64_t {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters in rational");
        return v;
    };
    if (slash != std::string::npos) {
        Rational64 r;
        r.num = parse_int(text.substr(0, slash));
        r.den = parse_int(text.substr(slash + 1));
        if (r.den == 0) throw std::invalid_argument("zero denominator");
        if (r.den < 0) { r.den = -r.den; r.num = -r.num; }
        return r;
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) {
        Rational64 r;
        r.num = parse_int(text);
        r.den = 1;
        return r;
    }
    // decimal literal: scale by a power of ten
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::size_t frac_len = text.size() - dot - 1;
    if (frac_len == 0 || frac_len > 15) throw std::invalid_argument("unsupported decimal length");
    Rational64 r;
    r.num = parse_int(digits);
    r.den = 1;
    for (std::size_t i = 0; i < frac_len; ++i) r.den *= 10;
    return r;
}

real median(std::vector<real> v) {
    if (v.empty()) throw std::invalid_argument("median of empty set");
    std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    real hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    return (v[mid - 1] + hi) / 2;
}

LineFit theil_sen(const std::vector<real>& x, const std::vector<real>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("theil_sen needs >= 2 points");
    std::vector<real> slopes;
    slopes.reserve(x.size() * (x.size() - 1) / 2);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            if (x[j] != x[i]) slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
    LineFit fit;
    fit.slope = median(slopes);
    std::vector<real> residuals(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) residuals[i] = y[i] - fit.slope * x[i];
    fit.intercept = median(residuals);
    return fit;
}

LineFit least_squares_line(const std::vector<real>& x, const std::vector<real>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("line fit needs >= 2 points");
    real n = static_cast<real>(x.size());
    real sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    real det = n * sxx - sx * sx;
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

std::vector<real> fd_weights(real z, const std::vector<real>& nodes, int m) {
    // B. Fornberg's recurrence for derivative weights on scattered nodes
    int n = static_cast<int>(nodes.size()) - 1;
    if (n < m) throw std::invalid_argument("fd_weights: not enough nodes");
    std::vector<std::vector<real>> c(n + 1, std::vector<real>(m + 1, 0));
    real c1 = 1, c4 = nodes[0] - z;
    c[0][0] = 1;
    for (int i = 1; i <= n; ++i) {
        int mn = std::min(i, m);
        real c2 = 1, c5 = c4;
        c4 = nodes[i] - z;
        for (int j = 0; j < i; ++j) {
            real c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<real> w(n + 1);
    for (int i = 0; i <= n; ++i) w[i] = c[i][m];
    return w;
}

PolyFit fit_poly_powers(const std::vector<real>& x, const std::vector<real>& y,
                        const std::vector<int>& exponents) {
    std::size_t n = x.size(), p = exponents.size();
    if (y.size() != n || n < p) throw std::invalid_argument("fit_poly_powers: bad sizes");
    // column scaling keeps the normal matrix well conditioned for small x
    std::vector<real> scale(p, 0);
    std::vector<std::vector<real>> A(n, std::vector<real>(p));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            A[i][j] = std::pow(x[i], exponents[j]);
            scale[j] = std::max(scale[j], std::fabs(A[i][j]));
        }
    for (auto& s : scale)
        if (s == 0) s = 1;
    std::vector<std::vector<real>> G(p, std::vector<real>(p, 0));
    std::vector<real> b(p, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            real aj = A[i][j] / scale[j];
            b[j] += aj * y[i];
            for (std::size_t k = 0; k <= j; ++k) G[j][k] += aj * (A[i][k] / scale[k]);
        }
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = j + 1; k < p; ++k) G[j][k] = G[k][j];

    // Gaussian elimination with partial pivoting; track min/max pivot for cond
    std::vector<std::vector<real>> M = G;
    std::vector<real> rhs = b;
    real piv_min = 0, piv_max = 0;
    std::vector<int> perm(p);
    for (std::size_t c0 = 0; c0 < p; ++c0) perm[c0] = static_cast<int>(c0);
    for (std::size_t c0 = 0; c0 < p; ++c0) {
        std::size_t best = c0;
        for (std::size_t r = c0 + 1; r < p; ++r)
            if (std::fabs(M[r][c0]) > std::fabs(M[best][c0])) best = r;
        std::swap(M[c0], M[best]);
        std::swap(rhs[c0], rhs[best]);
        real piv = M[c0][c0];
        if (piv == 0) throw std::runtime_error("fit_poly_powers: singular normal matrix");
        real ap = std::fabs(piv);
        piv_min = (c0 == 0) ? ap : std::min(piv_min, ap);
        piv_max = std::max(piv_max, ap);
        for (std::size_t r = c0 + 1; r < p; ++r) {
            real f = M[r][c0] / piv;
            for (std::size_t cc = c0; cc < p; ++cc) M[r][cc] -= f * M[c0][cc];
            rhs[r] -= f * rhs[c0];
        }
    }
    std::vector<real> sol(p);
    for (int r = static_cast<int>(p) - 1; r >= 0; --r) {
        real acc = rhs[r];
        for (std::size_t cc = r + 1; cc < p; ++cc) acc -= M[r][cc] * sol[cc];
        sol[r] = acc / M[r][r];
    }
    PolyFit fit;
    fit.coeffs.resize(p);
    for (std::size_t j = 0; j < p; ++j) fit.coeffs[j] = sol[j] / scale[j];
    fit.cond = (piv_min > 0) ? piv_max / piv_min : 1e300L;
    return fit;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns,
                     const std::string& schema) {
    FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    stream_ = f;
    if (!schema.empty()) std::fprintf(f, "# schema=%s\n", schema.c_str());
    for (std::size_t i = 0; i < columns.size(); ++i)
        std::fprintf(f, "%s%s", columns[i].c_str(), i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<real>& values) {
    FILE* f = static_cast<FILE*>(stream_);
    for (std::size_t i = 0; i < values.size(); ++i)
        std::fprintf(f, "%.17g%s", static_cast<double>(values[i]), i + 1 < values.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() {
    if (stream_) std::fclose(static_cast<FILE*>(stream_));
}

}  // namespace imploslab
