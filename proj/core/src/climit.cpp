#include "laxkit/climit.hpp"

#include <cmath>
#include <stdexcept>

namespace laxkit::climit {

using discrete::Kind;
using discrete::Model;


LimitSchedule default_schedule(Profile profile, double half_length) {
    LimitSchedule s;
    s.deltas = {0.1, 0.05, 0.025, 0.0125};
    s.half_length = half_length;
    s.profile = std::move(profile);
    return s;
}

namespace {

int site_count(double delta, double half_length) {
    const double n = 2.0 * half_length / delta;
    const int ni = int(std::lround(n));
    if (std::abs(n - ni) > 1e-9)
        throw std::invalid_argument("climit: 2L/delta must be an integer site count");
    return ni;
}

/// Reference grid (finest resolution x 4) with profile samples and spectral
/// derivatives, used for the continuum quadrature targets.
struct Reference {
    PeriodicGrid grid;
    CVector x, X, dx, d2x;
};

Reference reference_samples(const LimitSchedule& s) {
    const double dmin = s.deltas.back();
    const int n = 4 * site_count(dmin, s.half_length);
    Reference ref;
    ref.grid = PeriodicGrid{n, s.half_length};
    ref.x = CVector(n);
    ref.X = CVector(n);
    for (int j = 0; j < n; ++j) {
        ref.x[j] = s.profile.x_of(ref.grid.x(j));
        ref.X[j] = s.profile.X_of(ref.grid.x(j));
    }
    ref.dx = spectral_derivative(ref.grid, ref.x);
    ref.d2x = spectral_derivative(ref.grid, ref.x, 2);
    return ref;
}

/// I_k minus its vacuum value, written without the N-fold cancellation so the
/// 1/delta^k rescaling does not amplify summation roundoff.
cplx dst_charge_deviation(const PhasePoint& pt, int k) {
    const int n = pt.pairs();
    const CVector& x = pt.u;
    const CVector& X = pt.v;
    auto w = [n](int i) { return ((i % n) + n) % n; };
    auto nn = [&](int i) { return 1.0 - x[w(i)] * X[w(i)]; };
    cplx acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const cplx xi_Xi = x[i] * X[i];
        if (k == 1) {
            acc += -xi_Xi;
        } else if (k == 2) {
            acc += -x[w(i + 1)] * X[i] + 0.5 * xi_Xi * (nn(i) + 1.0);
        } else {
            acc += -x[w(i + 2)] * X[i] + (nn(i) + nn(i + 1)) * x[w(i + 1)] * X[i]
                 - xi_Xi * (nn(i) * nn(i) + nn(i) + 1.0) / 3.0;
        }
    }
    return acc;
}

double fit_order(const std::vector<double>& deltas, const std::vector<double>& errors) {
    if (deltas.size() < 3)
        throw std::invalid_argument("climit: Richardson fit needs at least 3 deltas");
    // Least-squares slope of log(error) against log(delta).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < deltas.size(); ++i) {
        if (errors[i] <= 0) continue;
        const double lx = std::log(deltas[i]), ly = std::log(errors[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++n;
    }
    if (n < 2) return std::numeric_limits<double>::infinity();  // errors at rounding floor
    return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

}  // namespace

PhasePoint discretize(const Profile& profile, double delta, double half_length) {
    const int n = site_count(delta, half_length);
    CVector x(n), X(n);
    for (int j = 0; j < n; ++j) {
        const double pos = -half_length + j * delta;
        x[j] = delta * profile.x_of(pos);
        X[j] = delta * profile.X_of(pos);
    }
    return discrete::make_dst_point(x, X);
}

ChargeLimitReport charge_limit(const LimitSchedule& schedule, int k,
                               const std::vector<cplx>& combo) {
    if (k < 1 || k > 3) throw std::out_of_range("charge_limit: k in 1..3");
    std::vector<cplx> weights = combo;
    if (weights.empty()) {
        weights.assign(size_t(k), cplx(0.0));
        weights[size_t(k - 1)] = 1.0;
    }
    if (int(weights.size()) != k)
        throw std::invalid_argument("charge_limit: combination needs k coefficients");

    const Reference ref = reference_samples(schedule);
    ChargeLimitReport rep;
    if (k == 1) {
        rep.continuum = integrate(ref.grid, CVector(ref.x.cwiseProduct(ref.X)));
    } else if (k == 2) {
        rep.continuum = integrate(ref.grid, CVector(ref.dx.cwiseProduct(ref.X)));
    } else {
        CVector dens = ref.d2x.cwiseProduct(ref.X)
                     + ref.x.cwiseProduct(ref.X).cwiseProduct(ref.x.cwiseProduct(ref.X));
        rep.continuum = integrate(ref.grid, dens);
    }

    for (double d : schedule.deltas) {
        const PhasePoint pt = discretize(schedule.profile, d, schedule.half_length);
        cplx combined = 0.0;
        for (int kk = 1; kk <= k; ++kk)
            combined += weights[size_t(kk - 1)] * dst_charge_deviation(pt, kk)
                      * (-1.0 / std::pow(d, kk));
        rep.deltas.push_back(d);
        rep.scaled.push_back(combined);
        rep.errors.push_back(std::abs(combined - rep.continuum));
    }
    rep.fitted_order = fit_order(rep.deltas, rep.errors);
    return rep;
}

LaxLimitReport lax_limit_check(const LimitSchedule& schedule, cplx lambda) {
    LaxLimitReport rep;

    // Continuum reference monodromy of U = [[l/2, x],[-X, -l/2]], i.e. the
    // first-flow connection under the identification psibar = x, psi = -X.
    const double dmin = schedule.deltas.back();
    const int nref = 4 * site_count(dmin, schedule.half_length);
    fields::FieldState cont = fields::vacuum_state(fields::FieldKind::Nls, nref,
                                                   schedule.half_length);
    for (int j = 0; j < nref; ++j) {
        const double pos = cont.grid.x(j);
        cont.comps[1][j] = schedule.profile.x_of(pos);   // psibar = x
        cont.comps[0][j] = -schedule.profile.X_of(pos);  // psi = -X
    }
    const CMatrix t_cont = fields::monodromy_numeric(fields::FieldKind::Nls, cont,
                                                     fields::ModelParams{}, lambda);

    for (double d : schedule.deltas) {
        const PhasePoint pt = discretize(schedule.profile, d, schedule.half_length);
        const int n = pt.pairs();
        const Model m{Kind::Dst, n};
        const cplx norm = std::exp(-d * lambda / 2.0);

        double worst = 0.0;
        CMatrix prod = CMatrix::Identity(2, 2);
        double worst_a = 0.0;
        for (int site = 1; site <= n; ++site) {
            const double pos = -schedule.half_length + (site - 1) * d;
            const CMatrix L = discrete::site_lax(m, site, pt, d * lambda);
            CMatrix u(2, 2);
            u << lambda / 2.0, schedule.profile.x_of(pos),
                 -schedule.profile.X_of(pos), -lambda / 2.0;
            worst = std::max(worst,
                max_abs(CMatrix(norm * L - CMatrix::Identity(2, 2) - d * u)) / (d * d));
            prod = (norm * L) * prod;

            // Rescaled second time component against the continuum V operator.
            const cplx mu = lambda;  // probe the same spectral point
            const CMatrix a = discrete::lax_time_component(m, 2, site, d * mu, pt) / d;
            CMatrix v(2, 2);
            v << mu, schedule.profile.x_of(pos), -schedule.profile.X_of(pos), 0.0;
            worst_a = std::max(worst_a, max_abs(CMatrix(a - v)));
        }
        rep.deltas.push_back(d);
        rep.expansion_ratio.push_back(worst);
        rep.monodromy_error.push_back(max_abs(CMatrix(prod - t_cont)));
        rep.time_component_error.push_back(worst_a);
    }
    return rep;
}

}  // namespace laxkit::climit
