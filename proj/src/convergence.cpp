#include <hps/convergence.hpp>

#include <algorithm>
#include <deque>
#include <set>

namespace hps
{

namespace
{

Real log_abs_or_neg_inf(const Real &x)
{
    return x.is_zero() ? Real::infinity(-1) : log(abs(x));
}

Counterexample cell(const NetContext &ctx, std::size_t i, std::string detail, json values = json::object())
{
    Counterexample cx;
    cx.grid_index = i;
    cx.eps = ctx.grid.points[i];
    cx.detail = std::move(detail);
    cx.values = std::move(values);
    return cx;
}

// Solves the normal equations of a least-squares problem by Gaussian
// elimination with partial pivoting.
std::vector<Real> least_squares(const std::vector<std::vector<Real>> &rows, const std::vector<Real> &rhs)
{
    const std::size_t m = rows.front().size();
    std::vector<std::vector<Real>> M(m, std::vector<Real>(m + 1, Real(0)));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                M[a][b] += rows[r][a] * rows[r][b];
            }
            M[a][m] += rows[r][a] * rhs[r];
        }
    }
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < m; ++r) {
            if (abs(M[r][c]) > abs(M[piv][c])) {
                piv = r;
            }
        }
        std::swap(M[c], M[piv]);
        if (M[c][c].is_zero()) {
            return {};
        }
        for (std::size_t r = 0; r < m; ++r) {
            if (r == c) {
                continue;
            }
            Real f = M[r][c] / M[c][c];
            for (std::size_t k = c; k <= m; ++k) {
                M[r][k] -= f * M[c][k];
            }
        }
    }
    std::vector<Real> out(m);
    for (std::size_t c = 0; c < m; ++c) {
        out[c] = M[c][m] / M[c][c];
    }
    return out;
}

// The 1/n^k corrections only help on smooth data; on envelope points they
// amplify the leftover oscillation.
std::vector<Real> basis(const Real &n, bool with_nlogn, bool corrections)
{
    const Real ln = log(n);
    std::vector<Real> b;
    if (with_nlogn) {
        b.push_back(n * ln);
    }
    b.push_back(n);
    b.push_back(ln);
    b.push_back(Real(1));
    if (corrections) {
        b.push_back(Real(1) / n);
        b.push_back(Real(1) / (n * n));
        b.push_back(Real(1) / (n * n * n));
    }
    return b;
}

std::optional<std::vector<Real>> fit(const std::vector<std::pair<Real, Real>> &pts, bool with_nlogn,
                                     bool corrections = true)
{
    std::size_t params = (with_nlogn ? 4 : 3) + (corrections ? 3 : 0);
    if (pts.size() < params + 1) {
        return std::nullopt;
    }
    std::vector<std::vector<Real>> rows;
    std::vector<Real> rhs;
    for (const auto &[n, l] : pts) {
        rows.push_back(basis(n, with_nlogn, corrections));
        rhs.push_back(l);
    }
    auto c = least_squares(rows, rhs);
    if (c.empty()) {
        return std::nullopt;
    }
    return c;
}

// Oscillating coefficients (complex conjugate poles, interleaved laws) put
// deep cancellation dips into log|a_n|, while the limsup only sees the upper
// envelope. Rough point sets are therefore reduced to their maxima over blocks
// of consecutive n; smooth ones are returned unchanged.
bool is_rough(const std::vector<std::pair<Real, Real>> &pts)
{
    bool rough = false;
    for (std::size_t k = 1; k + 1 < pts.size() && !rough; ++k) {
        const auto &[x0, y0] = pts[k - 1];
        const auto &[x1, y1] = pts[k];
        const auto &[x2, y2] = pts[k + 1];
        Real interp = y0 + (y2 - y0) * (x1 - x0) / (x2 - x0);
        rough = abs(y1 - interp) > Real(1);
    }
    return rough;
}

// Block maxima are taken after removing a straight-line trend, otherwise a
// steep slope always selects the block's first point.
std::vector<std::pair<Real, Real>> upper_envelope(const std::vector<std::pair<Real, Real>> &pts)
{
    constexpr long block = 8;
    std::vector<std::vector<Real>> rows;
    std::vector<Real> rhs;
    for (const auto &[n, l] : pts) {
        rows.push_back({n, Real(1)});
        rhs.push_back(l);
    }
    auto trend = least_squares(rows, rhs);
    auto detrended = [&](const std::pair<Real, Real> &p) {
        return trend.empty() ? p.second : p.second - trend[0] * p.first;
    };
    // Blocks start at the first point; a short final block is folded into
    // its predecessor so a lone dip cannot stand for a whole block.
    std::vector<std::pair<Real, Real>> out;
    std::vector<std::size_t> members;
    long current = 0;
    const Real n0 = pts.empty() ? Real(0) : pts.front().first;
    for (const auto &p : pts) {
        const long b = floor((p.first - n0) / Real(block)).to_long();
        if (out.empty() || b != current) {
            out.push_back(p);
            members.push_back(1);
            current = b;
        } else {
            ++members.back();
            if (detrended(p) > detrended(out.back())) {
                out.back() = p;
            }
        }
    }
    if (out.size() >= 2 && members.back() < members.front()) {
        if (detrended(out.back()) > detrended(out[out.size() - 2])) {
            out[out.size() - 2] = out.back();
        }
        out.pop_back();
    }
    return out;
}

constexpr double envelope_noise = 0.5;

Real rms_residual(const std::vector<std::pair<Real, Real>> &pts, const std::vector<Real> &c, bool with_nlogn,
                  bool corrections)
{
    Real sum(0);
    for (const auto &[n, l] : pts) {
        auto b = basis(n, with_nlogn, corrections);
        Real r = l;
        for (std::size_t k = 0; k < b.size(); ++k) {
            r -= c[k] * b[k];
        }
        sum += r * r;
    }
    return sqrt(sum / Real(static_cast<unsigned long>(pts.size())));
}

// Log-magnitude per (n, grid index) of a coefficient family.
Real coeff_log(const HpsCoefficients &a, std::size_t n, std::size_t i)
{
    if (a.structurally_zero(n)) {
        return Real::infinity(-1);
    }
    LogAbs la = a.log_abs(n, i);
    return la.sign == 0 ? Real::infinity(-1) : la.log_abs;
}

bool is_neg_inf(const Real &x)
{
    return x.is_inf() && x.sign() < 0;
}

} // namespace

GrowthFit fit_log_growth(const std::vector<std::pair<Real, Real>> &raw)
{
    const bool rough = is_rough(raw);
    const auto points = rough ? upper_envelope(raw) : raw;
    GrowthFit g;
    g.points = points.size();
    auto full = fit(points, true, !rough);
    if (!full) {
        // Too few points for the full model: fall back to the exponential rate
        // between the extreme points.
        if (points.size() >= 2) {
            const auto &a = points.front();
            const auto &b = points.back();
            g.E = Real(0);
            g.A = (b.second - a.second) / (b.first - a.first);
            g.geometric = true;
        } else {
            g.E = Real(0);
            g.A = points.empty() ? Real::infinity(-1) : points.front().second / points.front().first;
            g.geometric = true;
        }
        return g;
    }
    g.E = (*full)[0];
    // On envelope points the n log n coefficient is poorly conditioned; it
    // only counts when the geometric model leaves residuals above the
    // envelope noise.
    bool flat = abs(g.E) <= Real(growth_tolerance);
    if (!flat && rough) {
        auto reduced = fit(points, false, false);
        flat = reduced && rms_residual(points, *reduced, false, false) <= Real(envelope_noise);
    }
    if (flat) {
        auto reduced = fit(points, false, !rough);
        g.geometric = true;
        g.A = reduced ? (*reduced)[0] : (*full)[1];
        g.E = Real(0);
    } else {
        g.A = (*full)[1];
    }
    return g;
}

std::optional<WeakWitness> witness_from(const Verdict &v)
{
    if (!v.passed() || !v.witness.contains("Q") || !v.witness.contains("R")) {
        return std::nullopt;
    }
    return WeakWitness{v.witness["Q"].get<long>(), v.witness["R"].get<long>()};
}

Verdict check_weak_moderate(const HpsCoefficients &a, std::size_t n_max, long Q_max, long R_max)
{
    if (n_max < 8) {
        throw ConfigError("check_weak_moderate needs n_max >= 8");
    }
    a.require_depth(n_max);
    const NetContext &ctx = a.context();
    const auto tail = ctx.grid.tail();
    if (tail.empty()) {
        throw ConfigError("empty grid tail");
    }
    // w[n][i] = log|a_n| / log(1/rho): the exponent of rho^-w.
    std::vector<std::vector<Real>> w(n_max + 1, std::vector<Real>(ctx.size()));
    std::vector<std::vector<std::pair<Real, Real>>> pts(ctx.size());
    for (std::size_t n = 0; n <= n_max; ++n) {
        for (std::size_t i : tail) {
            Real l = coeff_log(a, n, i);
            w[n][i] = is_neg_inf(l) ? l : snap(l / -ctx.rho.log_values()[i], 4);
            // Early transients (partial sums settling, say) would bend the
            // fit, so it only sees the last three quarters of the window.
            if (n >= (n_max >= 32 ? n_max / 4 : 1) && !is_neg_inf(l)) {
                pts[i].emplace_back(Real(static_cast<unsigned long>(n)), l);
            }
        }
    }

    // Super-geometric growth: log|a_n| ~ E n log n with E > 0 beats every
    // rho^(-nQ-R).
    bool growing_everywhere = true;
    std::vector<GrowthFit> fits(ctx.size());
    for (std::size_t i : tail) {
        fits[i] = fit_log_growth(pts[i]);
        if (!(fits[i].E > Real(growth_tolerance))) {
            growing_everywhere = false;
        }
    }
    if (growing_everywhere) {
        const std::size_t i = tail.back();
        const GrowthFit &f = fits[i];
        const Real L = -ctx.rho.log_values()[i];
        // First index where the fitted growth exceeds rho^(-n Q_max - R_max).
        Real n_star(0);
        for (unsigned long n = n_max; n < (1ul << 62); n *= 2) {
            Real rn(n);
            Real pred = f.E * rn * log(rn) + f.A * rn;
            if (pred > (rn * Real(Q_max) + Real(R_max)) * L) {
                n_star = rn;
                break;
            }
        }
        json values = {{"E", real_json(f.E)}, {"A", real_json(f.A)}};
        if (!n_star.is_zero()) {
            values["n_exceeds_bound"] = real_json(n_star);
        }
        return Verdict::fail(cell(ctx, i, "coefficients grow like (n!)^E with E > 0; no (Q, R) bounds them", values),
                             "super-geometric growth on every tail point");
    }

    // A bound rho^(-nQ-R) found on n <= n_max only certifies uniformity in n
    // when w_n - nQ has stopped rising by the end of the window.
    auto rising = [&](long Q) {
        for (std::size_t i : tail) {
            std::optional<std::size_t> hi, mid;
            for (std::size_t n = n_max + 1; n-- > 0;) {
                if (is_neg_inf(w[n][i])) {
                    continue;
                }
                if (!hi) {
                    hi = n;
                } else if (n <= (3 * n_max) / 4) {
                    mid = n;
                    break;
                }
            }
            if (hi && mid
                && w[*hi][i] - Real(static_cast<long>(*hi) * Q)
                       > w[*mid][i] - Real(static_cast<long>(*mid) * Q) + Real(trend_tolerance)) {
                return true;
            }
        }
        return false;
    };
    bool all_rising = true;
    for (long Q = 0; Q <= Q_max; ++Q) {
        if (rising(Q)) {
            continue;
        }
        all_rising = false;
        Real need(0);
        for (std::size_t n = 0; n <= n_max; ++n) {
            for (std::size_t i : tail) {
                if (!is_neg_inf(w[n][i])) {
                    need = max(need, w[n][i] - Real(static_cast<long>(n) * Q));
                }
            }
        }
        Real R = ceil(snap(need, 4));
        if (R <= Real(R_max)) {
            return Verdict::pass({{"Q", Q}, {"R", R.to_long()}, {"n_max", n_max}});
        }
    }

    // Slope of the exponent in n growing as eps shrinks means no fixed Q works.
    bool widening = true;
    Real prev_slope;
    for (std::size_t k = 0; k < tail.size(); ++k) {
        const std::size_t i = tail[k];
        Real slope = fits[i].A / -ctx.rho.log_values()[i];
        if (k > 0 && !(slope > prev_slope)) {
            widening = false;
        }
        prev_slope = slope;
    }
    if (all_rising && widening && prev_slope > Real(Q_max) && tail.size() >= 2) {
        const std::size_t i = tail.back();
        return Verdict::fail(cell(ctx, i, "per-n exponent slope exceeds Q_max and grows as eps shrinks",
                                  {{"slope", real_json(prev_slope)}}));
    }
    return Verdict::inconclusive("no (Q, R) <= (" + std::to_string(Q_max) + ", " + std::to_string(R_max)
                                 + ") bounds the coefficients on the grid");
}

Verdict check_strong_eq(const HpsCoefficients &a, const HpsCoefficients &a_bar, std::size_t n_max, long q_max,
                        long r_max)
{
    a.require_depth(n_max);
    a_bar.require_depth(n_max);
    const NetContext &ctx = a.context();
    const auto tail = ctx.grid.tail();
    if (tail.empty()) {
        throw ConfigError("empty grid tail");
    }
    std::vector<std::vector<Real>> v(n_max + 1, std::vector<Real>(ctx.size(), Real::infinity(1)));
    for (std::size_t n = 0; n <= n_max; ++n) {
        for (std::size_t i : tail) {
            Real d = clean_difference(a(n, i), a_bar(n, i));
            if (!d.is_zero()) {
                v[n][i] = snap(log(d) / ctx.rho.log_values()[i], 4);
            }
        }
    }
    json failing = json::array();
    std::optional<std::pair<std::size_t, std::size_t>> first_cell;
    std::optional<std::pair<long, long>> first_point;
    for (long q = 0; q <= q_max; ++q) {
        for (long r = 0; r <= r_max; ++r) {
            bool ok = true;
            for (std::size_t n = 0; n <= n_max && ok; ++n) {
                for (std::size_t i : tail) {
                    if (v[n][i] < Real(static_cast<long>(n) * q + r)) {
                        ok = false;
                        if (!first_cell) {
                            first_cell = {n, i};
                            first_point = {q, r};
                        }
                        break;
                    }
                }
            }
            if (!ok) {
                failing.push_back({q, r});
            }
        }
    }
    // Trend proxy for "for all q, r": per-n valuations must not decrease along
    // the tail.
    bool rising = true;
    for (std::size_t n = 0; n <= n_max && rising; ++n) {
        for (std::size_t k = 1; k < tail.size(); ++k) {
            const Real &prev = v[n][tail[k - 1]];
            const Real &cur = v[n][tail[k]];
            if (prev.is_inf()) {
                if (!cur.is_inf()) {
                    rising = false;
                    break;
                }
                continue;
            }
            if (cur < prev - Real(trend_tolerance)) {
                rising = false;
                break;
            }
        }
    }
    json w = {{"q_max", q_max}, {"r_max", r_max}, {"failing", failing}};
    if (failing.empty()) {
        if (rising) {
            return Verdict::pass(w);
        }
        return Verdict::inconclusive("lattice holds but the difference valuation decreases along the tail", w);
    }
    const auto [n, i] = *first_cell;
    bool catching_up = false;
    for (std::size_t k = 1; k < tail.size(); ++k) {
        if (v[n][tail[k]] > v[n][tail[k - 1]] + Real(trend_tolerance)) {
            catching_up = true;
        }
    }
    json values = {{"n", n}, {"q", first_point->first}, {"r", first_point->second},
                   {"valuation", real_json(v[n][i])}};
    if (!catching_up) {
        return Verdict::fail(cell(ctx, i, "|a_n - a_bar_n| > rho^(nq+r)", values), "", w);
    }
    return Verdict::inconclusive("lattice fails on the grid but the difference valuation is still rising", w);
}

std::string to_string(RadiusClass c)
{
    switch (c) {
        case RadiusClass::Infinite:
            return "infinite";
        case RadiusClass::BeyondAllTestedPowers:
            return "beyond-all-tested-powers";
        case RadiusClass::Moderate:
            return "moderate";
    }
    return "?";
}

json RadiusEstimate::to_json(bool curves) const
{
    json j;
    j["window"] = {window.first, window.second};
    j["r"] = reals_json(r.values);
    j["inv_r"] = reals_json(inv_r.values);
    j["method"] = method;
    j["growth_E"] = reals_json(growth);
    if (!warnings.empty()) {
        j["warnings"] = warnings;
    }
    if (curves && !running_max.empty()) {
        json c = json::array();
        for (const auto &row : running_max) {
            c.push_back(reals_json(row));
        }
        j["running_max"] = c;
    }
    return j;
}

namespace
{

struct RootEstimate {
    Real inv_r;
    Real E;
    std::string method;
};

RootEstimate estimate_root(const std::vector<std::pair<Real, Real>> &pts)
{
    GrowthFit f = fit_log_growth(pts);
    if (f.E < -Real(growth_tolerance)) {
        return {Real(0), f.E, "super-geometric-decay"};
    }
    if (f.E > Real(growth_tolerance)) {
        return {Real::infinity(1), f.E, "super-geometric-growth"};
    }
    return {exp(f.A), f.E, "fit"};
}

bool roughly_equal(const Real &a, const Real &b)
{
    if (a.is_zero() || b.is_zero() || a.is_inf() || b.is_inf()) {
        return a == b;
    }
    return abs(a - b) <= Real(1e-3) * max(abs(a), abs(b));
}

} // namespace

RadiusEstimate radius(const HpsCoefficients &a, std::size_t n_lo, std::size_t n_hi, bool curves)
{
    if (n_lo < 1 || n_hi < n_lo + 16) {
        throw ConfigError("radius window needs 1 <= n_lo and n_hi - n_lo >= 16");
    }
    a.require_depth(n_hi);
    const NetContext &ctx = a.context();
    RadiusEstimate est;
    est.window = {n_lo, n_hi};
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        std::vector<std::pair<Real, Real>> pts;
        for (std::size_t n = n_lo; n <= n_hi; ++n) {
            Real l = coeff_log(a, n, i);
            if (!is_neg_inf(l)) {
                pts.emplace_back(Real(static_cast<unsigned long>(n)), l);
            }
        }
        if (curves) {
            std::vector<Real> row;
            Real best = Real(0);
            for (std::size_t n = n_lo; n <= n_hi; ++n) {
                Real l = coeff_log(a, n, i);
                if (!is_neg_inf(l)) {
                    best = max(best, exp(l / Real(static_cast<unsigned long>(n))));
                }
                row.push_back(best);
            }
            est.running_max.push_back(std::move(row));
        }
        if (pts.empty()) {
            bool below = false;
            for (std::size_t n = 0; n < n_lo && !below; ++n) {
                below = !is_neg_inf(coeff_log(a, n, i));
            }
            if (below) {
                est.warnings.push_back("eps#" + std::to_string(i)
                                       + ": nonzero coefficients only below n_lo; widen the window");
            }
            est.r.values.push_back(Real::infinity(1));
            est.inv_r.values.push_back(Real(0));
            est.method.emplace_back("vanishing");
            est.growth.emplace_back(0);
            continue;
        }
        // Exact path: |a_n|^(1/n) constant over the window.
        Real lo = pts.front().second / pts.front().first;
        Real hi = lo;
        for (const auto &[n, l] : pts) {
            Real u = l / n;
            lo = min(lo, u);
            hi = max(hi, u);
        }
        if (hi - lo <= noise_floor(max(Real(1), abs(hi)))) {
            const auto &[n_last, l_last] = pts.back();
            const std::size_t n = static_cast<std::size_t>(n_last.to_long());
            Real value = a(n, i);
            Real inv = value.is_finite() && !value.is_zero() ? rootn(abs(value), n) : exp(l_last / n_last);
            est.inv_r.values.push_back(inv);
            est.r.values.push_back(Real(1) / inv);
            est.method.emplace_back("exact");
            est.growth.emplace_back(0);
            continue;
        }
        RootEstimate e = estimate_root(pts);
        // limsup picks the largest subsequence: when the even and odd entries
        // follow different laws, the full fit describes neither.
        std::vector<std::pair<Real, Real>> even, odd;
        for (const auto &p : pts) {
            (p.first.to_long() % 2 == 0 ? even : odd).push_back(p);
        }
        if (even.size() >= 16 && odd.size() >= 16) {
            RootEstimate ee = estimate_root(even);
            RootEstimate eo = estimate_root(odd);
            if (ee.method != eo.method || !roughly_equal(ee.inv_r, eo.inv_r)) {
                const bool from_even = ee.inv_r >= eo.inv_r;
                e = from_even ? ee : eo;
                e.method += from_even ? "-even" : "-odd";
            }
        }
        est.growth.push_back(e.E);
        est.inv_r.values.push_back(e.inv_r);
        est.r.values.push_back(e.inv_r.is_zero() ? Real::infinity(1)
                               : e.inv_r.is_inf() ? Real(0)
                                                  : Real(1) / e.inv_r);
        est.method.push_back(e.method);
    }
    return est;
}

json RadiusClassification::to_json() const
{
    json j;
    json c = json::array();
    for (auto k : classes) {
        c.push_back(to_string(k));
    }
    j["classes"] = c;
    j["P_m"] = P_m ? json(*P_m) : json(nullptr);
    j["subpoints"] = {{"infinite", infinite}, {"beyond-all-tested-powers", beyond}, {"moderate", moderate}};
    if (!notes.empty()) {
        j["notes"] = notes;
    }
    return j;
}

RadiusClassification classify_radius(const RadiusEstimate &rad, const NetContext &ctx, long P_max)
{
    RadiusClassification out;
    Real P_need(0);
    bool any_tail_moderate = false;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        const Real &r = rad.r.values[i];
        const Real L = -ctx.rho.log_values()[i];
        if (r.is_inf()) {
            out.classes.push_back(RadiusClass::Infinite);
            out.infinite.push_back(i);
            continue;
        }
        if (r.is_zero()) {
            out.classes.push_back(RadiusClass::Moderate);
            out.moderate.push_back(i);
            out.notes.push_back("eps#" + std::to_string(i) + ": r = 0 (coefficients are not weakly moderate)");
            if (i >= ctx.grid.tail_start) {
                any_tail_moderate = true;
            }
            continue;
        }
        Real e = snap(log(r) / L, 4); // r = rho^-e
        if (e > Real(P_max)) {
            out.classes.push_back(RadiusClass::BeyondAllTestedPowers);
            out.beyond.push_back(i);
            continue;
        }
        out.classes.push_back(RadiusClass::Moderate);
        out.moderate.push_back(i);
        if (i >= ctx.grid.tail_start) {
            any_tail_moderate = true;
            P_need = max(P_need, ceil(e));
        }
    }
    if (any_tail_moderate) {
        out.P_m = P_need.to_long();
    }
    return out;
}

namespace
{

// Adds terms a_n d^n in increasing n for one grid point.
class Summer
{
public:
    Summer(const HpsCoefficients &a, std::size_t i, Real d) : a_(a), i_(i), d_(std::move(d)) {}

    static constexpr std::size_t ring_size = 8;
    static constexpr std::size_t zero_run_limit = 256;

    // Adds term n_; returns the term.
    Real step()
    {
        Real t(0);
        if (!(n_ > 0 && d_.is_zero()) && !a_.structurally_zero(n_)) {
            if (auto depth = a_.depth(); depth && n_ > *depth) {
                throw CoefficientRange(n_, *depth);
            }
            t = a_(n_, i_) * pw_;
            if (!t.is_finite()) {
                throw PrecisionError("term leaves the exponent range", n_, i_);
            }
        }
        sum_ += t;
        if (!sum_.is_finite()) {
            throw PrecisionError("partial sum leaves the exponent range", n_, i_);
        }
        if (t.is_zero()) {
            ++zero_run_;
        } else {
            zero_run_ = 0;
            int s = t.sign();
            sign_ = sign_ == 0 ? s : (sign_ == s ? sign_ : 2);
            ring_.push_back(abs(t));
            if (ring_.size() > ring_size) {
                ring_.pop_front();
            }
        }
        pw_ *= d_;
        ++n_;
        return t;
    }

    /// Geometric majorant of the remaining terms, or nullopt if the recent
    /// terms do not contract.
    std::optional<Real> tail_bound() const
    {
        if (d_.is_zero() && n_ >= 1) {
            return Real(0);
        }
        if (zero_run_ >= zero_run_limit) {
            return Real(0);
        }
        if (ring_.size() < ring_size || zero_run_ > 0) {
            return std::nullopt;
        }
        // Stride 1 covers ordinary geometric decay; stride 2 also covers
        // families whose even and odd terms decay at different rates.
        std::optional<Real> best;
        for (std::size_t stride : {1, 2}) {
            Real r(0);
            for (std::size_t k = stride; k < ring_.size(); ++k) {
                r = max(r, ring_[k] / ring_[k - stride]);
            }
            if (!(r < Real(1))) {
                continue;
            }
            Real last(0);
            for (std::size_t k = ring_.size() - stride; k < ring_.size(); ++k) {
                last += ring_[k];
            }
            Real b = last * r / (Real(1) - r);
            best = best ? min(*best, b) : b;
        }
        return best;
    }

    /// Remaining terms cannot move the rounded partial sum.
    bool settled(const Real &bound) const
    {
        return bound <= ldexp(abs(sum_), -static_cast<long>(working_precision()) - 2);
    }

    const Real &sum() const { return sum_; }
    std::size_t n() const { return n_; }
    bool same_sign() const { return sign_ != 2; }

private:
    const HpsCoefficients &a_;
    std::size_t i_;
    Real d_;
    Real pw_{1};
    Real sum_{0};
    std::size_t n_ = 0;
    std::size_t zero_run_ = 0;
    int sign_ = 0;
    std::deque<Real> ring_;
};

// Same-sign tail: the sum dominates every single term. Samples log|a_n d^n|
// on a geometric ladder of indices beyond n_from and returns the largest.
Real sampled_log_lower(const HpsCoefficients &a, std::size_t i, const Real &d, std::size_t n_from, int sign)
{
    Real best = Real::infinity(-1);
    if (d.is_zero()) {
        return best;
    }
    const Real dlog = log(abs(d));
    const int dsign = d.sign();
    Real log_n = log(Real(static_cast<unsigned long>(std::max<std::size_t>(n_from, 1))));
    const Real step = log(Real(5) / Real(4));
    for (int k = 0; k < 400; ++k, log_n += step) {
        Real n = floor(exp(log_n));
        if (!n.is_finite() || n > Real(static_cast<unsigned long>(1ul << 62))) {
            break;
        }
        Real ln = log(n);
        auto la = a.log_abs_at(n, ln, i);
        if (!la || la->sign == 0) {
            continue;
        }
        // Sign of a_n d^n must match the partial sum.
        bool odd = !(floor(n / Real(2)) * Real(2) == n);
        int s = la->sign * (odd && dsign < 0 ? -1 : 1);
        if (s != sign) {
            break;
        }
        best = max(best, la->log_abs + n * dlog);
    }
    return best;
}

std::vector<Real> valuations_with_bounds(const GenNum &value, const SumInfo &info, const NetContext &ctx)
{
    std::vector<Real> logs;
    for (std::size_t i = 0; i < value.size(); ++i) {
        logs.push_back(info.log_lower[i] ? *info.log_lower[i] : log_abs_or_neg_inf(value[i]));
    }
    return valuation_from_logs(logs, ctx.rho, ctx.grid);
}

bool any_lower(const SumInfo &info, const EpsGrid &grid)
{
    for (std::size_t i = grid.tail_start; i < info.log_lower.size(); ++i) {
        if (info.log_lower[i]) {
            return true;
        }
    }
    return false;
}

// Moderateness of a net whose tail entries may be magnitude lower bounds.
Verdict moderate_with_bounds(const GenNum &value, const SumInfo &info, const NetContext &ctx, long N_max)
{
    Verdict v = is_moderate_valuation(valuations_with_bounds(value, info, ctx), ctx.grid, N_max);
    if (v.passed() && any_lower(info, ctx.grid)) {
        return Verdict::inconclusive("only magnitude lower bounds are available on part of the tail", v.witness);
    }
    return v;
}

} // namespace

GenNum hyperfinite_sum(const HpsSeries &s, const GenNum &x, const HyperNat &N, std::size_t n_cap, SumInfo *info)
{
    const NetContext &ctx = s.context();
    if (x.size() != ctx.size() || N.size() != ctx.size()) {
        throw std::invalid_argument("hyperfinite_sum: shapes differ");
    }
    GenNum out;
    SumInfo local;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        Summer sum(s.coeffs, i, x[i] - s.center[i]);
        const Real &Ni = N.values[i];
        Real bound(0);
        for (;;) {
            if (Real(static_cast<unsigned long>(sum.n())) > Ni) {
                break;
            }
            if (sum.n() >= n_cap) {
                throw PrecisionError("hyperfinite sum needs more than " + std::to_string(n_cap) + " terms", sum.n(),
                                     i);
            }
            sum.step();
            if (auto b = sum.tail_bound(); b && sum.settled(*b)) {
                bound = *b;
                break;
            }
        }
        out.values.push_back(sum.sum());
        local.terms.push_back(sum.n());
        local.tail_bound.push_back(bound);
        local.log_lower.emplace_back();
    }
    if (info) {
        *info = std::move(local);
    }
    return out;
}

GenNum series_limit(const HpsSeries &s, const GenNum &x, long q_target)
{
    LimitOptions opt;
    opt.q_target = q_target;
    return series_limit(s, x, opt, nullptr);
}

GenNum series_limit(const HpsSeries &s, const GenNum &x, const LimitOptions &opt, SumInfo *info)
{
    const NetContext &ctx = s.context();
    if (x.size() != ctx.size()) {
        throw std::invalid_argument("series_limit: shapes differ");
    }
    GenNum out;
    SumInfo local;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        Summer sum(s.coeffs, i, x[i] - s.center[i]);
        const Real L = -ctx.rho.log_values()[i];
        const Real target = exp(Real(-opt.q_target) * L);
        std::optional<Real> explode_log;
        if (opt.explode_valuation) {
            explode_log = Real(*opt.explode_valuation) * L;
        }
        std::optional<Real> lower;
        Real bound(0);
        for (;;) {
            if (sum.n() >= opt.n_cap) {
                if (explode_log && sum.same_sign() && !sum.sum().is_zero()) {
                    lower = max(log(abs(sum.sum())),
                                sampled_log_lower(s.coeffs, i, x[i] - s.center[i], sum.n(), sum.sum().sign()));
                    break;
                }
                throw DivergentSeries("no convergent tail within " + std::to_string(opt.n_cap) + " terms", i);
            }
            sum.step();
            if (auto b = sum.tail_bound()) {
                const Real tol = target * (Real(1) + abs(sum.sum()));
                if (sum.settled(*b) || (*b <= tol && *b <= noise_floor(Real(1) + abs(sum.sum()), 8))) {
                    bound = *b;
                    break;
                }
            }
            if (explode_log && sum.same_sign() && !sum.sum().is_zero()
                && log_abs_or_neg_inf(sum.sum()) > *explode_log) {
                lower = max(log(abs(sum.sum())),
                            sampled_log_lower(s.coeffs, i, x[i] - s.center[i], sum.n(), sum.sum().sign()));
                break;
            }
        }
        out.values.push_back(sum.sum());
        local.terms.push_back(sum.n());
        local.tail_bound.push_back(bound);
        local.log_lower.push_back(lower);
    }
    if (info) {
        *info = std::move(local);
    }
    return out;
}

Verdict is_formal_hps(const HpsSeries &s, const GenNum &x, int sample_count, long N_max, std::size_t n_cap)
{
    if (sample_count < 4) {
        throw ConfigError("is_formal_hps needs sample_count >= 4");
    }
    const NetContext &ctx = s.context();
    // Ladder N_0 = 0, N_j = floor(sigma^-j).
    std::vector<HyperNat> ladder;
    {
        HyperNat zero;
        zero.values.assign(ctx.size(), Real(0));
        zero.log_values.assign(ctx.size(), Real::infinity(-1));
        ladder.push_back(zero);
        for (int j = 1; j < sample_count; ++j) {
            ladder.push_back(sigma_power(ctx, j));
        }
    }
    const std::size_t J = ladder.size();
    // prefix[j][i] = S(N_j) and before[j][i] = S(N_j - 1), when computed.
    std::vector<std::vector<std::optional<Real>>> prefix(J, std::vector<std::optional<Real>>(ctx.size()));
    std::vector<std::vector<std::optional<Real>>> before(J, std::vector<std::optional<Real>>(ctx.size()));
    std::vector<Real> stop_log(ctx.size(), Real::infinity(-1));
    std::vector<bool> stop_same_sign(ctx.size(), true);
    std::vector<Real> dlog(ctx.size());

    for (std::size_t i = 0; i < ctx.size(); ++i) {
        const Real d = x[i] - s.center[i];
        dlog[i] = log_abs_or_neg_inf(d);
        Summer sum(s.coeffs, i, d);
        const Real explode = Real(N_max + 1) * -ctx.rho.log_values()[i];
        Real target = Real(-1);
        for (std::size_t j = 0; j < J; ++j) {
            const Real &Nj = ladder[j].values[i];
            if (Nj.is_finite()) {
                target = max(target, Nj);
            }
        }
        bool converged = false;
        for (;;) {
            const Real n_here(static_cast<unsigned long>(sum.n()));
            // Record checkpoints: partial sum over n < n_here is S(n_here - 1).
            for (std::size_t j = 0; j < J; ++j) {
                const Real &Nj = ladder[j].values[i];
                if (Nj == n_here) {
                    before[j][i] = sum.sum();
                }
                if (Nj + Real(1) == n_here) {
                    prefix[j][i] = sum.sum();
                }
            }
            if (n_here > target) {
                break;
            }
            if (sum.n() >= n_cap) {
                break;
            }
            sum.step();
            if (auto b = sum.tail_bound(); b && sum.settled(*b)) {
                converged = true;
                break;
            }
            if (sum.same_sign() && !sum.sum().is_zero() && log(abs(sum.sum())) > explode) {
                break;
            }
        }
        if (converged) {
            // Every later checkpoint sees the same rounded sum.
            for (std::size_t j = 0; j < J; ++j) {
                const Real &Nj = ladder[j].values[i];
                if (!before[j][i] && (!Nj.is_finite() || Nj >= Real(static_cast<unsigned long>(sum.n())))) {
                    before[j][i] = sum.sum();
                }
                if (!prefix[j][i]) {
                    prefix[j][i] = sum.sum();
                }
            }
        }
        stop_log[i] = log_abs_or_neg_inf(sum.sum());
        stop_same_sign[i] = sum.same_sign();
        if (J > 0 && !before[0][i]) {
            before[0][i] = Real(0);
        }
    }

    json pairs = json::array();
    Status overall = Status::Pass;
    std::optional<Counterexample> first_cx;
    std::string notes;
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t k = j + 1; k < J; ++k) {
            std::vector<Real> logs(ctx.size());
            bool lower_used = false;
            bool unknown = false;
            for (std::size_t i : ctx.grid.tail()) {
                if (prefix[k][i] && before[j][i]) {
                    logs[i] = log_abs_or_neg_inf(*prefix[k][i] - *before[j][i]);
                    // Differences of converged sums are rounding noise.
                    if (!logs[i].is_inf()
                        && abs(*prefix[k][i] - *before[j][i])
                               <= noise_floor(max(abs(*prefix[k][i]), abs(*before[j][i])))) {
                        logs[i] = Real::infinity(-1);
                    }
                    continue;
                }
                if (!stop_same_sign[i]) {
                    unknown = true;
                    continue;
                }
                // Same-sign terms: the block dominates each of its terms, and a
                // block starting at 0 dominates every partial sum.
                Real lb = j == 0 ? stop_log[i] : Real::infinity(-1);
                const Real &Mk = ladder[k].values[i];
                const Real &logMk = ladder[k].log_values[i];
                if (auto la = s.coeffs.log_abs_at(Mk, logMk, i); la && la->sign != 0) {
                    Real pw;
                    if (dlog[i].is_zero()) {
                        pw = Real(0);
                    } else {
                        pw = exp(logMk) * dlog[i];
                    }
                    lb = max(lb, la->log_abs + pw);
                }
                logs[i] = lb;
                lower_used = true;
            }
            json pj = {{"j", j}, {"k", k}};
            if (unknown) {
                pj["status"] = "inconclusive";
                overall = combine(overall, Status::Inconclusive);
                pairs.push_back(pj);
                continue;
            }
            for (std::size_t i = 0; i < ctx.grid.tail_start; ++i) {
                logs[i] = Real::infinity(-1);
            }
            Verdict v = is_moderate_valuation(valuation_from_logs(logs, ctx.rho, ctx.grid), ctx.grid, N_max);
            if (v.passed() && lower_used) {
                v = Verdict::inconclusive("lower bounds only", v.witness);
            }
            pj["status"] = to_string(v.status);
            pj["moderate"] = v.witness;
            pairs.push_back(pj);
            overall = combine(overall, v.status);
            if (v.failed() && !first_cx) {
                first_cx = v.counterexample;
                first_cx->detail = "block sum over [N_" + std::to_string(j) + ", N_" + std::to_string(k)
                                   + "] is not moderate: " + first_cx->detail;
            }
        }
    }
    json w = {{"ladder", "N_0 = 0, N_j = floor(sigma^-j)"}, {"blocks", pairs}};
    if (overall == Status::Pass) {
        return Verdict::pass(w);
    }
    if (overall == Status::Fail) {
        return Verdict::fail(*first_cx, notes, w);
    }
    return Verdict::inconclusive("some block sums could not be bounded within the term budget", w);
}

HpsCoefficients derived_family(const HpsCoefficients &a, int k)
{
    if (k < 0) {
        throw std::invalid_argument("negative derivative order");
    }
    if (k == 0) {
        return a;
    }
    std::optional<std::size_t> depth;
    if (auto d = a.depth()) {
        depth = *d >= static_cast<std::size_t>(k) ? *d - k : 0;
    }
    return HpsCoefficients::from_function(
        a.context_ptr(),
        [a, k](std::size_t n, std::size_t i) {
            Real f(1);
            for (int j = 1; j <= k; ++j) {
                f *= Real(static_cast<unsigned long>(n + j));
            }
            return f * a(n + k, i);
        },
        "D^" + std::to_string(k) + "(" + a.describe() + ")", depth,
        [a, k](std::size_t n) { return a.structurally_zero(n + k); });
}

Verdict derivative_net_moderate(const HpsSeries &s, const GenNum &x, int k_max, long N_max)
{
    if (k_max < 1) {
        throw ConfigError("derivative_net_moderate needs k_max >= 1");
    }
    const NetContext &ctx = s.context();
    json per_k = json::array();
    Status overall = Status::Pass;
    std::optional<Counterexample> cx;
    for (int k = 1; k <= k_max; ++k) {
        HpsSeries dk(derived_family(s.coeffs, k), s.center, s.name);
        LimitOptions opt;
        opt.explode_valuation = N_max + 1;
        SumInfo info;
        GenNum value = series_limit(dk, x, opt, &info);
        Verdict v = moderate_with_bounds(value, info, ctx, N_max);
        per_k.push_back({{"k", k}, {"status", to_string(v.status)}, {"moderate", v.witness}});
        overall = combine(overall, v.status);
        if (v.failed() && !cx) {
            cx = v.counterexample;
            cx->detail = "derivative net of order " + std::to_string(k) + ": " + cx->detail;
        }
    }
    json w = {{"derivatives", per_k}};
    if (overall == Status::Pass) {
        return Verdict::pass(w);
    }
    if (overall == Status::Fail) {
        return Verdict::fail(*cx, "", w);
    }
    return Verdict::inconclusive("some derivative nets could not be bounded", w);
}

json ConvergenceReport::to_json() const
{
    json j;
    j["cond_radius"] = cond_radius.to_json();
    j["cond_formal"] = cond_formal.to_json();
    j["cond_limit"] = cond_limit.to_json();
    j["cond_derivs"] = cond_derivs.to_json();
    j["overall"] = overall.to_json();
    if (limit) {
        j["limit"] = reals_json(limit->values);
    }
    return j;
}

namespace
{

Verdict radius_condition(const HpsSeries &s, const GenNum &x, const ConvergeOptions &opt)
{
    const NetContext &ctx = s.context();
    RadiusEstimate rad = radius(s.coeffs, opt.n_lo, opt.n_hi);
    for (std::size_t i : ctx.grid.tail()) {
        const Real &r = rad.r.values[i];
        if (r.is_inf()) {
            continue;
        }
        Real dist = abs(x[i] - s.center[i]);
        Real gap = r - dist;
        json values = {{"r", real_json(r)}, {"distance", real_json(dist)}};
        if (gap.sign() <= 0) {
            return Verdict::fail(cell(ctx, i, "|x - c| >= r", values), "", {{"m", opt.margin_m}});
        }
        if (gap < exp(Real(opt.margin_m) * ctx.rho.log_values()[i])) {
            return Verdict::inconclusive("gap r - |x - c| below rho^m at eps#" + std::to_string(i),
                                         {{"m", opt.margin_m}});
        }
    }
    return Verdict::pass({{"m", opt.margin_m}, {"radius", rad.to_json()}});
}

} // namespace

ConvergenceReport converges_at(const HpsSeries &s, const GenNum &x, const ConvergeOptions &opt)
{
    const NetContext &ctx = s.context();
    ConvergenceReport rep;
    rep.cond_radius = radius_condition(s, x, opt);
    rep.cond_formal = is_formal_hps(s, x, opt.sample_count, opt.N_max, opt.n_cap);

    LimitOptions lopt;
    lopt.q_target = opt.q_target;
    lopt.n_cap = opt.n_cap;
    lopt.explode_valuation = opt.N_max + 1;
    SumInfo info;
    try {
        GenNum L = series_limit(s, x, lopt, &info);
        rep.limit = L;
        Verdict mod = moderate_with_bounds(L, info, ctx, opt.N_max);
        if (!mod.passed()) {
            rep.cond_limit = mod;
            rep.cond_limit.notes = "limit net: " + (mod.notes.empty() ? to_string(mod.status) : mod.notes);
        } else {
            json rungs = json::array();
            Status top = Status::Inconclusive;
            for (int j = 1; j <= opt.ladder; ++j) {
                HyperNat N = sigma_power(ctx, j);
                json rj = {{"j", j}};
                try {
                    GenNum S = hyperfinite_sum(s, x, N, opt.n_cap);
                    Verdict e = ext_eq(S, L, ctx.rho, ctx.grid, opt.q_limit);
                    rj["status"] = to_string(e.status);
                    top = e.status;
                } catch (const PrecisionError &err) {
                    rj["status"] = "inconclusive";
                    rj["error"] = err.what();
                    top = Status::Inconclusive;
                }
                rungs.push_back(rj);
            }
            json w = {{"moderate", mod.witness}, {"q", opt.q_limit}, {"ladder", rungs}};
            if (top == Status::Pass) {
                rep.cond_limit = Verdict::pass(w);
            } else if (top == Status::Fail) {
                rep.cond_limit = Verdict::fail(cell(ctx, ctx.size() - 1, "hyperfinite sums at the top rung do not "
                                                                          "approach the limit"),
                                               "", w);
            } else {
                rep.cond_limit = Verdict::inconclusive("hyperfinite sums not decided at the top rung", w);
            }
        }
    } catch (const DivergentSeries &e) {
        rep.cond_limit = Verdict::fail(cell(ctx, e.grid_index(), e.what()), "eps-wise series diverges");
    }

    try {
        rep.cond_derivs = derivative_net_moderate(s, x, opt.k_max, opt.N_max);
    } catch (const DivergentSeries &e) {
        rep.cond_derivs = Verdict::fail(cell(ctx, e.grid_index(), e.what()), "derived series diverges");
    }

    Status st = Status::Pass;
    for (const Verdict *v : {&rep.cond_radius, &rep.cond_formal, &rep.cond_limit, &rep.cond_derivs}) {
        st = combine(st, v->status);
    }
    json w = {{"cond_radius", to_string(rep.cond_radius.status)},
              {"cond_formal", to_string(rep.cond_formal.status)},
              {"cond_limit", to_string(rep.cond_limit.status)},
              {"cond_derivs", to_string(rep.cond_derivs.status)}};
    if (st == Status::Pass) {
        rep.overall = Verdict::pass(w);
    } else if (st == Status::Fail) {
        for (const Verdict *v : {&rep.cond_radius, &rep.cond_formal, &rep.cond_limit, &rep.cond_derivs}) {
            if (v->failed()) {
                rep.overall = Verdict::fail(*v->counterexample, "", w);
                break;
            }
        }
    } else {
        rep.overall = Verdict::inconclusive("some conditions are undecided on the grid", w);
    }
    return rep;
}

json EventualBoundReport::to_json() const
{
    return {{"R_exponent", R_exponent}, {"R", reals_json(R_bound.values)}, {"N_start", N_start},
            {"verdict", verdict.to_json()}};
}

EventualBoundReport eventually_bounded(const HpsSeries &s, const GenNum &x, std::size_t n_max, long N_max)
{
    if (n_max < 8) {
        throw ConfigError("eventually_bounded needs n_max >= 8");
    }
    const NetContext &ctx = s.context();
    const auto tail = ctx.grid.tail();
    EventualBoundReport rep;
    std::vector<std::vector<Real>> lt(n_max + 1, std::vector<Real>(ctx.size(), Real::infinity(-1)));
    Real p_need(0);
    for (std::size_t i : tail) {
        const Real dl = log_abs_or_neg_inf(x[i] - s.center[i]);
        const Real L = -ctx.rho.log_values()[i];
        for (std::size_t n = 0; n <= n_max; ++n) {
            Real l = coeff_log(s.coeffs, n, i);
            if (is_neg_inf(l)) {
                continue;
            }
            if (n > 0) {
                if (is_neg_inf(dl)) {
                    continue;
                }
                l += Real(static_cast<unsigned long>(n)) * dl;
            }
            lt[n][i] = l;
            p_need = max(p_need, snap(l / L, 4));
        }
        // Terms still growing at the end of the window: no moderate bound.
        std::optional<std::size_t> hi, mid;
        for (std::size_t n = n_max + 1; n-- > 0;) {
            if (!is_neg_inf(lt[n][i])) {
                if (!hi) {
                    hi = n;
                } else if (n <= (3 * n_max) / 4) {
                    mid = n;
                    break;
                }
            }
        }
        if (hi && mid && lt[*hi][i] > lt[*mid][i] + Real(trend_tolerance)) {
            rep.verdict = Verdict::fail(cell(ctx, i, "summands still growing at the end of the window",
                                             {{"n", *hi}, {"log_term", real_json(lt[*hi][i])}}));
            return rep;
        }
    }
    const Real p = ceil(p_need);
    if (p > Real(N_max)) {
        rep.verdict = Verdict::fail(cell(ctx, tail.back(), "summands exceed rho^-N_max"),
                                    "summands are not moderately bounded");
        return rep;
    }
    rep.R_exponent = p.to_long();
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        rep.R_bound.values.push_back(Real(2) * exp(-p * ctx.rho.log_values()[i]));
    }
    rep.N_start = 0;
    rep.verdict = Verdict::pass({{"R", "2*rho^-" + std::to_string(rep.R_exponent)},
                                 {"R_exponent", rep.R_exponent},
                                 {"N_start", 0},
                                 {"n_max", n_max}});
    return rep;
}

json ShortcutResult::to_json() const
{
    json j = {{"verdict", verdict.to_json()}, {"h", reals_json(h)}, {"K", reals_json(K.values)}};
    if (limit) {
        j["limit"] = reals_json(limit->values);
    }
    return j;
}

ShortcutResult converge_shortcut(const HpsSeries &s, const GenNum &x, const GenNum &x_bar,
                                 const ConvergeOptions &opt)
{
    const NetContext &ctx = s.context();
    if (!s.gauge_order.passed()) {
        throw PreconditionError(Precondition::GaugeOrder, "sigma <= rho^Q does not hold for any tested Q > 0");
    }
    ShortcutResult out;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        Real dx = abs(x[i] - s.center[i]);
        Real db = abs(x_bar[i] - s.center[i]);
        if (i >= ctx.grid.tail_start && !(dx < db)) {
            throw PreconditionError(Precondition::StrictInequality,
                                    "|x - c| < |x_bar - c| fails at eps#" + std::to_string(i));
        }
        out.h.push_back(db.is_zero() ? Real(0) : dx / db);
    }
    ConvergenceReport at_bar = converges_at(s, x_bar, opt);
    if (!at_bar.overall.passed()) {
        throw PreconditionError(Precondition::ConvergenceAtBound,
                                "x_bar is not in the set of convergence (" + to_string(at_bar.overall.status) + ")");
    }
    EventualBoundReport eb = eventually_bounded(s, x_bar, 64, opt.N_max);
    if (!eb.verdict.passed()) {
        throw PreconditionError(Precondition::EventualBound, "summands at x_bar are not eventually bounded");
    }
    out.K = eb.R_bound;
    LimitOptions lopt;
    lopt.q_target = opt.q_target;
    lopt.n_cap = opt.n_cap;
    lopt.explode_valuation = opt.N_max + 1;
    SumInfo info;
    GenNum L = series_limit(s, x, lopt, &info);
    out.limit = L;
    Verdict mod = moderate_with_bounds(L, info, ctx, opt.N_max);
    json w = {{"moderate", mod.witness}, {"majorant", "K*h^n"}, {"K_exponent", eb.R_exponent}};
    if (mod.passed()) {
        out.verdict = Verdict::pass(w);
    } else if (mod.failed()) {
        out.verdict = Verdict::fail(*mod.counterexample, "limit at x is not moderate", w);
    } else {
        out.verdict = Verdict::inconclusive(mod.notes, w);
    }
    return out;
}

GenNum ball_guarantee(const HpsCoefficients &a)
{
    if (!a.witness) {
        throw MissingWitness("no weak-moderateness witness; run check_weak_moderate first");
    }
    return GenNum::gauge_power(a.context(), Real(a.witness->Q));
}

} // namespace hps
