#include "runners.hpp"

#include "laxkit/cartan.hpp"
#include "laxkit/climit.hpp"
#include "laxkit/discrete.hpp"
#include "laxkit/expr.hpp"
#include "laxkit/fields.hpp"
#include "laxkit/rmatrix.hpp"
#include "laxkit/version.hpp"
#include "laxkit/wz.hpp"

#include "sha256.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

namespace laxkit::tools {

namespace {

using discrete::Kind;
using discrete::Model;
using fields::FieldKind;

bool is_discrete_kind(const std::string& kind) {
    return kind == "dst" || kind == "toda-quadratic" || kind == "toda" || kind == "toda-linear";
}

std::uint64_t effective_seed(const RunConfig& cfg, const RunOptions& opt) {
    if (opt.seed_override) return opt.seed;
    return std::uint64_t(cfg.get_int_or("run", "seed", 1));
}

void emit(const ResultTable& table, const RunOptions& opt, const RunConfig& cfg,
          std::uint64_t seed, const std::string& started_at,
          const std::chrono::steady_clock::time_point& t0, const std::string& summary) {
    const std::string body = table.render(opt.format);
    if (opt.out_path.empty()) {
        std::cout << body;
    } else {
        std::ofstream out(opt.out_path, std::ios::binary);
        if (!out) throw ConfigError("cannot write output file: " + opt.out_path);
        out << body;
    }
    Manifest man;
    man.config_sha256 = sha256_hex(cfg.raw_text());
    man.seed = seed;
    man.version = kVersion;
    man.started_at = started_at;
    man.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    man.results = summary;
    if (!opt.out_path.empty()) {
        std::ofstream mout(opt.out_path + ".manifest.json", std::ios::binary);
        mout << man.to_json();
    } else {
        std::cerr << man.to_json();
    }
}

/// Evaluate an init-section expression over lattice sites (binding j = 1..N).
CVector eval_sites(const std::string& text, int n) {
    const auto ast = expr::parse(text);
    CVector out(n);
    for (int j = 0; j < n; ++j)
        out[j] = expr::eval(ast, {{"j", cplx(double(j + 1), 0.0)}});
    return out;
}

/// Evaluate an init-section expression over grid positions (binding x).
CVector eval_grid(const std::string& text, const PeriodicGrid& g) {
    const auto ast = expr::parse(text);
    CVector out(g.points);
    for (int j = 0; j < g.points; ++j)
        out[j] = expr::eval(ast, {{"x", cplx(g.x(j), 0.0)}});
    return out;
}

Model discrete_model(const RunConfig& cfg) {
    Model m{discrete::kind_from_string(cfg.get("model", "kind")),
            int(cfg.get_int("model", "sites"))};
    if (m.sites < 2) throw ConfigError("model.sites must be >= 2");
    return m;
}

PhasePoint discrete_init(const RunConfig& cfg, const Model& m, SplitMix64& rng) {
    if (!cfg.has("init", "x") && !cfg.has("init", "q")) {
        if (cfg.get_or("init", "random", "no") == "yes")
            return discrete::random_point(m, rng, cfg.get_double_or("init", "amplitude", 0.3));
        return discrete::vacuum_point(m);
    }
    if (m.kind == Kind::Dst) {
        CVector x = eval_sites(cfg.get("init", "x"), m.sites);
        CVector X = eval_sites(cfg.get("init", "X"), m.sites);
        return discrete::make_dst_point(x, X);
    }
    CVector q = eval_sites(cfg.get("init", "q"), m.sites);
    CVector p = eval_sites(cfg.get("init", "p"), m.sites);
    return discrete::make_toda_point(m, q, p);
}

fields::FieldState field_init(const RunConfig& cfg, FieldKind kind, SplitMix64& rng) {
    const int points = int(cfg.get_int_or("model", "points", 256));
    const double half = cfg.get_double_or("model", "half_length", 8.0);
    if (cfg.get_or("init", "random", "no") == "yes")
        return fields::random_state(kind, points, half, int(cfg.get_int_or("init", "kmax", 5)),
                                    cfg.get_double_or("init", "amplitude", 0.3), rng);
    fields::FieldState s = fields::vacuum_state(kind, points, half);
    static const std::map<FieldKind, std::vector<std::string>> names = {
        {FieldKind::Nls, {"psi", "psibar"}},
        {FieldKind::SineGordon, {"phi", "pi"}},
        {FieldKind::Liouville, {"phi", "pi"}},
        {FieldKind::AtftA2, {"phi1", "phi2", "pi1", "pi2"}},
        {FieldKind::LandauLifshitz, {"S1", "S2", "S3"}},
    };
    const auto& comps = names.at(kind);
    bool any = false;
    for (size_t c = 0; c < comps.size(); ++c)
        if (cfg.has("init", comps[c])) {
            s.comps[c] = eval_grid(cfg.get("init", comps[c]), s.grid);
            any = true;
        }
    if (any && kind == FieldKind::Nls && !cfg.has("init", "psibar"))
        s.comps[1] = s.comps[0].conjugate();
    if (kind == FieldKind::LandauLifshitz && any) {
        for (int j = 0; j < s.grid.points; ++j) {
            const double n = std::sqrt(std::norm(s.comps[0][j]) + std::norm(s.comps[1][j])
                                       + std::norm(s.comps[2][j]));
            if (n == 0.0) throw ConfigError("ll init: zero spin vector");
            for (int c = 0; c < 3; ++c) s.comps[size_t(c)][j] /= n;
        }
    }
    return s;
}

fields::ModelParams field_params(const RunConfig& cfg) {
    fields::ModelParams p;
    p.mass = cfg.get_double_or("model", "mass", 1.0);
    p.beta = cfg.get_double_or("model", "beta", 1.0);
    if (p.mass <= 0) throw ConfigError("model.mass must be positive");
    if (p.beta == 0) throw ConfigError("model.beta must be nonzero");
    return p;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyResult {
    ResultTable table;
    double max_scaled = 0.0;
};

VerifyResult verify_cybe(const RunConfig& cfg, std::uint64_t seed, int jobs) {
    const std::string family = cfg.get_or("verify", "family", "yangian");
    const int n = int(cfg.get_int_or("verify", "n", 2));
    SpectralOperator r;
    if (family == "yangian") r = yangian_r(n);
    else if (family == "trig") r = trig_An_r(n);
    else if (family == "sine-gordon") r = sine_gordon_r();
    else if (family == "permutation-fixture") r = permutation_fixture(n);
    else throw ConfigError("verify.family must be yangian|trig|sine-gordon|permutation-fixture");

    const int samples = int(cfg.get_int_or("verify", "samples", 100));
    VerifyResult res{ResultTable({"sample", "lambda1", "lambda2", "residual", "scaled_residual"}), 0.0};
    std::vector<std::array<double, 4>> rows;
    rows.resize(size_t(samples));
    SplitMix64 rng(seed);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < samples; ++i) {
        // |lambda| in [0.1, 3], sign random, kept off the pole set.
        const double l1 = rng.uniform(0.1, 3.0) * (rng.next_u64() % 2 ? 1.0 : -1.0);
        double l2 = rng.uniform(0.1, 3.0) * (rng.next_u64() % 2 ? 1.0 : -1.0);
        if (std::abs(l1 - l2) < 0.05) l2 += 0.1;
        pts.emplace_back(l1, l2);
    }
    parallel_for(samples, jobs, [&](int i) {
        const auto [l1, l2] = pts[size_t(i)];
        const double rnorm = max_abs(r(cplx(l1 - l2)));
        const double resid = cybe_residual(r, cplx(l1), cplx(l2));
        rows[size_t(i)] = {l1, l2, resid, resid / (rnorm * rnorm)};
    });
    for (int i = 0; i < samples; ++i) {
        const auto& q = rows[size_t(i)];
        res.table.add_row({std::to_string(i), fmt(q[0]), fmt(q[1]), fmt(q[2]), fmt(q[3])});
        res.max_scaled = std::max(res.max_scaled, q[3]);
    }
    return res;
}

VerifyResult verify_sklyanin(const RunConfig& cfg, std::uint64_t seed, int jobs) {
    const Model m = discrete_model(cfg);
    if (m.kind == Kind::TodaLinear)
        throw ConfigError("verify sklyanin applies to dst and toda-quadratic");
    const int points = int(cfg.get_int_or("verify", "points", 20));
    const int pairs = int(cfg.get_int_or("verify", "pairs", 10));
    const bool monodromy_level = cfg.get_or("verify", "level", "site") == "monodromy";
    VerifyResult res{ResultTable({"point", "pair", "lambda", "mu", "residual"}), 0.0};
    SplitMix64 rng(seed);
    struct Job { PhasePoint pt; double l, mu; int ip, iq; };
    std::vector<Job> jobs_list;
    for (int ip = 0; ip < points; ++ip) {
        PhasePoint pt = discrete::random_point(m, rng);
        for (int iq = 0; iq < pairs; ++iq) {
            const double l = rng.uniform(-2.0, 2.0);
            double mu = rng.uniform(-2.0, 2.0);
            if (std::abs(l - mu) < 0.1) mu += 0.3;
            jobs_list.push_back({pt, l, mu, ip, iq});
        }
    }
    std::vector<double> residuals(jobs_list.size());
    parallel_for(int(jobs_list.size()), jobs, [&](int i) {
        const Job& jb = jobs_list[size_t(i)];
        residuals[size_t(i)] = monodromy_level
            ? discrete::sklyanin_monodromy_residual(m, jb.pt, jb.l, jb.mu)
            : discrete::sklyanin_residual(m, jb.pt, jb.l, jb.mu);
    });
    for (size_t i = 0; i < jobs_list.size(); ++i) {
        const Job& jb = jobs_list[i];
        res.table.add_row({std::to_string(jb.ip), std::to_string(jb.iq), fmt(jb.l), fmt(jb.mu),
                           fmt(residuals[i])});
        res.max_scaled = std::max(res.max_scaled, residuals[i]);
    }
    return res;
}

VerifyResult verify_linear_bracket(const RunConfig& cfg, std::uint64_t seed, int jobs) {
    const Model m = discrete_model(cfg);
    if (m.kind != Kind::TodaLinear)
        throw ConfigError("verify linear-bracket applies to toda-linear");
    const int points = int(cfg.get_int_or("verify", "points", 20));
    const int pairs = int(cfg.get_int_or("verify", "pairs", 5));
    const bool fixture = cfg.get_or("verify", "family", "") == "permutation-fixture";
    VerifyResult res{ResultTable({"point", "pair", "lambda", "mu", "residual"}), 0.0};
    SplitMix64 rng(seed);
    for (int ip = 0; ip < points; ++ip) {
        PhasePoint pt = discrete::random_point(m, rng);
        for (int iq = 0; iq < pairs; ++iq) {
            const double l = rng.uniform(-0.8, 0.8);
            double mu = rng.uniform(-0.8, 0.8);
            if (std::abs(l - mu) < 0.05) mu += 0.2;
            double resid;
            if (!fixture) {
                resid = discrete::linear_bracket_residual(pt, l, mu);
            } else {
                // Deliberate non-solution: rational r in place of the
                // exchange-type one.
                MatrixObservable L1 = discrete::linear_lax_observable(pt, std::exp(2.0 * l));
                MatrixObservable L2 = discrete::linear_lax_observable(pt, std::exp(2.0 * mu));
                const CMatrix eye = CMatrix::Identity(m.sites, m.sites);
                const CMatrix M = tensor_product(L1.value, eye) + tensor_product(eye, L2.value);
                const CMatrix r = yangian_r(m.sites)(cplx(l - mu));
                resid = max_abs(CMatrix(matrix_bracket(L1, L2) - (r * M - M * r)));
            }
            res.table.add_row({std::to_string(ip), std::to_string(iq), fmt(l), fmt(mu), fmt(resid)});
            res.max_scaled = std::max(res.max_scaled, resid);
        }
    }
    (void)jobs;
    return res;
}

VerifyResult verify_involution(const RunConfig& cfg, std::uint64_t seed, int jobs) {
    const Model m = discrete_model(cfg);
    const int points = int(cfg.get_int_or("verify", "points", 20));
    VerifyResult res{ResultTable({"point", "pair", "residual"}), 0.0};
    SplitMix64 rng(seed);
    for (int ip = 0; ip < points; ++ip) {
        PhasePoint pt = discrete::random_point(m, rng);
        std::vector<std::pair<std::string, double>> rows;
        if (m.kind == Kind::Dst) {
            for (int i = 1; i <= 3; ++i)
                for (int j = i + 1; j <= 3; ++j)
                    rows.emplace_back("I" + std::to_string(i) + ",I" + std::to_string(j),
                                      discrete::involution_residual(
                                          discrete::charge_observable(m, pt, i),
                                          discrete::charge_observable(m, pt, j)));
        } else if (m.kind == Kind::TodaQuadratic) {
            rows.emplace_back("I1,I2", discrete::involution_residual(
                                           discrete::charge_observable(m, pt, 1),
                                           discrete::charge_observable(m, pt, 2)));
            const cplx l(rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5));
            const cplx mu(rng.uniform(-1.5, -0.5), rng.uniform(-0.5, 0.5));
            rows.emplace_back("t(l),t(mu)", discrete::involution_residual(
                                                discrete::transfer_observable(m, pt, l),
                                                discrete::transfer_observable(m, pt, mu)));
        } else {
            const cplx u1 = std::exp(cplx(rng.uniform(0.2, 1.0)));
            const cplx u2 = std::exp(cplx(rng.uniform(-1.0, -0.2)));
            rows.emplace_back("trL2(l),trL2(mu)",
                              discrete::involution_residual(
                                  discrete::powertrace_observable(pt, 2, u1),
                                  discrete::powertrace_observable(pt, 2, u2)));
        }
        for (auto& [label, resid] : rows) {
            res.table.add_row({std::to_string(ip), label, fmt(resid)});
            res.max_scaled = std::max(res.max_scaled, resid);
        }
    }
    (void)jobs;
    return res;
}

VerifyResult verify_zc_discrete(const RunConfig& cfg, std::uint64_t seed, int jobs) {
    const Model m = discrete_model(cfg);
    const int generator = int(cfg.get_int_or("verify", "generator", 2));
    const int points = int(cfg.get_int_or("verify", "points", 20));
    VerifyResult res{ResultTable({"point", "mu", "residual"}), 0.0};
    SplitMix64 rng(seed);
    for (int ip = 0; ip < points; ++ip) {
        PhasePoint pt = discrete::random_point(m, rng);
        const double mu = rng.uniform(-1.0, 1.0);
        const double resid = discrete::zero_curvature_residual(m, generator, mu, pt);
        res.table.add_row({std::to_string(ip), fmt(mu), fmt(resid)});
        res.max_scaled = std::max(res.max_scaled, resid);
    }
    (void)jobs;
    return res;
}

VerifyResult verify_zc_continuum(const RunConfig& cfg, std::uint64_t seed, int jobs) {
    const FieldKind kind = fields::field_kind_from_string(cfg.get("model", "kind"));
    const fields::ModelParams params = field_params(cfg);
    const fields::Variant variant =
        fields::variant_from_string(cfg.get_or("verify", "variant", "hamiltonian"));
    const int points = int(cfg.get_int_or("verify", "samples", 5));
    const int m = int(cfg.get_int_or("model", "points", 256));
    const double L = cfg.get_double_or("model", "half_length", 8.0);
    const int kmax = int(cfg.get_int_or("init", "kmax", 6));
    const double amp = cfg.get_double_or("init", "amplitude", 0.3);
    VerifyResult res{ResultTable({"sample", "lambda", "residual"}), 0.0};
    SplitMix64 rng(seed);
    for (int ip = 0; ip < points; ++ip) {
        fields::FieldState s = fields::random_state(kind, m, L, kmax, amp, rng);
        const double lam = rng.uniform(0.2, 1.0);
        const double resid = fields::zero_curvature_residual(kind, variant, s, params, lam);
        res.table.add_row({std::to_string(ip), fmt(lam), fmt(resid)});
        res.max_scaled = std::max(res.max_scaled, resid);
    }
    (void)jobs;
    return res;
}

VerifyResult verify_wz(const RunConfig& cfg, std::uint64_t seed, int jobs) {
    const FieldKind kind = fields::field_kind_from_string(cfg.get("model", "kind"));
    const fields::ModelParams params = field_params(cfg);
    const int order = int(cfg.get_int_or("verify", "order", 2));
    const int samples = int(cfg.get_int_or("verify", "samples", 5));
    const int m = int(cfg.get_int_or("model", "points", 256));
    const double L = cfg.get_double_or("model", "half_length", 8.0);
    VerifyResult res{ResultTable({"sample", "recursion_residual", "charge_mismatch"}), 0.0};
    SplitMix64 rng(seed);
    for (int ip = 0; ip < samples; ++ip) {
        fields::FieldState s = fields::random_state(kind, m, L, 5, 0.3, rng);
        const fields::WzReport rep = fields::wz_check(kind, s, params, order);
        const double worst = std::max(rep.max_recursion_residual(), rep.max_charge_mismatch());
        res.table.add_row({std::to_string(ip), fmt(rep.max_recursion_residual()),
                           fmt(rep.max_charge_mismatch())});
        res.max_scaled = std::max(res.max_scaled, worst);
    }
    (void)jobs;
    return res;
}

VerifyResult verify_jacobi(const RunConfig& cfg, std::uint64_t seed, int jobs) {
    const int n = int(cfg.get_int_or("verify", "pairs_count", 2));
    const int samples = int(cfg.get_int_or("verify", "samples", 50));
    VerifyResult res{ResultTable({"sample", "residual"}), 0.0};
    SplitMix64 rng(seed);
    for (int ip = 0; ip < samples; ++ip) {
        PhasePoint pt;
        pt.u = CVector(n);
        pt.v = CVector(n);
        pt.orientation = "(u,v)";
        for (int i = 0; i < n; ++i) {
            pt.u[i] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
            pt.v[i] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        }
        auto rand_jet = [&]() {
            Jet2 acc(n, cplx(rng.uniform(-1, 1), 0.0));
            for (int t = 0; t < 3; ++t) {
                Jet2 a = Jet2::coordinate_u(n, int(rng.next_u64() % std::uint64_t(n)), pt);
                Jet2 b = Jet2::coordinate_v(n, int(rng.next_u64() % std::uint64_t(n)), pt);
                Jet2 term = (rng.next_u64() % 2) ? a * b : a * a;
                if (rng.next_u64() % 3 == 0) term = term + b.scaled(0.4).exp();
                acc = acc + term.scaled(cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
            }
            return acc;
        };
        const double resid = jacobi_residual(rand_jet(), rand_jet(), rand_jet());
        res.table.add_row({std::to_string(ip), fmt(resid)});
        res.max_scaled = std::max(res.max_scaled, resid);
    }
    (void)jobs;
    return res;
}

VerifyResult verify_cartan(const RunConfig& cfg, std::uint64_t, int) {
    const int rank = int(cfg.get_int_or("verify", "rank", 2));
    const CartanResiduals r = cartan_residuals(cartan_data(rank));
    VerifyResult res{ResultTable({"invariant", "residual"}), 0.0};
    res.table.add_row({"root_norms", fmt(r.root_norms)});
    res.table.add_row({"weight_duality", fmt(r.weight_duality)});
    res.table.add_row({"root_sum", fmt(r.root_sum)});
    res.table.add_row({"cartan_weyl", fmt(r.cartan_weyl)});
    res.table.add_row({"chevalley", fmt(r.chevalley)});
    res.table.add_row({"serre", fmt(r.serre)});
    res.max_scaled = r.max();
    return res;
}

}  // namespace

int run_verify(const std::string& check, const RunConfig& cfg, const RunOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string started = iso8601_now();
    const std::uint64_t seed = effective_seed(cfg, opt);
    const double tolerance = cfg.get_double_or("verify", "tolerance", 1e-10);
    if (tolerance <= 0) throw ConfigError("verify.tolerance must be positive");

    VerifyResult res{ResultTable({}), 0.0};
    if (check == "cybe") res = verify_cybe(cfg, seed, opt.jobs);
    else if (check == "sklyanin") res = verify_sklyanin(cfg, seed, opt.jobs);
    else if (check == "linear-bracket") res = verify_linear_bracket(cfg, seed, opt.jobs);
    else if (check == "involution") res = verify_involution(cfg, seed, opt.jobs);
    else if (check == "zero-curvature-discrete") res = verify_zc_discrete(cfg, seed, opt.jobs);
    else if (check == "zero-curvature-continuum") res = verify_zc_continuum(cfg, seed, opt.jobs);
    else if (check == "wz") res = verify_wz(cfg, seed, opt.jobs);
    else if (check == "jacobi") res = verify_jacobi(cfg, seed, opt.jobs);
    else if (check == "cartan") res = verify_cartan(cfg, seed, opt.jobs);
    else throw ConfigError("unknown check: " + check);

    const bool pass = res.max_scaled <= tolerance;
    emit(res.table, opt, cfg, seed, started, t0,
         "check=" + check + " max_residual=" + fmt(res.max_scaled)
             + " tolerance=" + fmt(tolerance) + " pass=" + (pass ? "1" : "0"));
    std::cerr << "verify " << check << ": max residual " << fmt(res.max_scaled)
              << (pass ? " <= " : " > ") << fmt(tolerance) << "\n";
    return pass ? 0 : 1;
}

int run_charges(const RunConfig& cfg, const RunOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string started = iso8601_now();
    const std::uint64_t seed = effective_seed(cfg, opt);
    SplitMix64 rng(seed);
    const std::string kind = cfg.get("model", "kind");
    ResultTable table({"charge", "closed_re", "closed_im", "extracted_re", "extracted_im",
                       "sign", "offset_re", "offset_im"});
    if (is_discrete_kind(kind)) {
        const Model m = discrete_model(cfg);
        PhasePoint pt = discrete_init(cfg, m, rng);
        if (m.kind == Kind::TodaLinear) {
            const auto rep = discrete::powertrace_charges(pt, 2);
            for (size_t k = 0; k < rep.charges.size(); ++k) {
                auto cc = cplx_cells(rep.charges[k]);
                table.add_row({"I" + std::to_string(k + 1), cc[0], cc[1], cc[0], cc[1],
                               fmt(1.0), fmt(0.0), fmt(0.0)});
            }
        } else {
            const int count = (m.kind == Kind::Dst) ? std::min(3, m.sites) : 2;
            const auto closed = discrete::closed_form_charges(m, pt, count);
            const auto extracted = discrete::extract_charges(m, pt, count);
            for (int k = 0; k < count; ++k) {
                auto cc = cplx_cells(closed.charges[size_t(k)]);
                auto ce = cplx_cells(extracted.charges[size_t(k)]);
                auto co = cplx_cells(extracted.offsets[size_t(k)]);
                table.add_row({"I" + std::to_string(k + 1), cc[0], cc[1], ce[0], ce[1],
                               fmt(extracted.signs[size_t(k)]), co[0], co[1]});
            }
        }
    } else {
        const FieldKind fk = fields::field_kind_from_string(kind);
        fields::FieldState s = field_init(cfg, fk, rng);
        const auto rep = fields::charges(fk, s, field_params(cfg));
        for (size_t k = 0; k < rep.values.size(); ++k) {
            auto cc = cplx_cells(rep.values[k]);
            table.add_row({rep.names[k], cc[0], cc[1], cc[0], cc[1], fmt(1.0), fmt(0.0), fmt(0.0)});
        }
    }
    emit(table, opt, cfg, seed, started, t0, "rows=" + std::to_string(table.rows()));
    return 0;
}

int run_simulate(const RunConfig& cfg, const RunOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string started = iso8601_now();
    const std::uint64_t seed = effective_seed(cfg, opt);
    SplitMix64 rng(seed);
    const std::string kind = cfg.get("model", "kind");
    const double dt = cfg.get_double("run", "dt");
    const int steps = int(cfg.get_int("run", "steps"));
    const int sample_every = int(cfg.get_int_or("run", "sample_every", std::max(1, steps / 200)));
    const std::string scheme = cfg.get_or("run", "scheme", "rk4");

    if (is_discrete_kind(kind)) {
        const Model m = discrete_model(cfg);
        PhasePoint pt = discrete_init(cfg, m, rng);
        const int generator = int(cfg.get_int_or("run", "generator",
                                                  m.kind == Kind::TodaQuadratic ? 2 : 3));
        const int count = (m.kind == Kind::Dst) ? std::min(3, m.sites) : 2;
        const discrete::Scheme sc = (scheme == "leapfrog") ? discrete::Scheme::Leapfrog
                                                           : discrete::Scheme::Rk4;
        const auto traj = discrete::integrate(m, generator, pt, dt, steps, sc, count, sample_every);
        std::vector<std::string> cols = {"time"};
        for (int k = 1; k <= count; ++k) {
            cols.push_back("I" + std::to_string(k) + "_re");
            cols.push_back("I" + std::to_string(k) + "_im");
        }
        ResultTable table(cols);
        for (size_t i = 0; i < traj.times.size(); ++i) {
            std::vector<std::string> row = {fmt(traj.times[i])};
            const auto ch = discrete::closed_form_charges(m, traj.samples[i], count);
            for (int k = 0; k < count; ++k) {
                auto cc = cplx_cells(ch.charges[size_t(k)]);
                row.push_back(cc[0]);
                row.push_back(cc[1]);
            }
            table.add_row(row);
        }
        std::string summary = "steps=" + std::to_string(steps);
        for (size_t k = 0; k < traj.drift.rel_drift.size(); ++k)
            summary += " drift_I" + std::to_string(k + 1) + "=" + fmt(traj.drift.rel_drift[k]);
        if (traj.drift.nan_detected)
            summary += " nan_at_step=" + std::to_string(traj.drift.nan_step);
        emit(table, opt, cfg, seed, started, t0, summary);
        return traj.drift.nan_detected ? 1 : 0;
    }

    const FieldKind fk = fields::field_kind_from_string(kind);
    fields::FieldState s = field_init(cfg, fk, rng);
    const fields::ModelParams params = field_params(cfg);
    fields::FieldScheme sc = fields::FieldScheme::Rk4;
    if (scheme == "split-step") sc = fields::FieldScheme::SplitStep;
    else if (scheme == "leapfrog") sc = fields::FieldScheme::Leapfrog;
    else if (scheme != "rk4") throw ConfigError("run.scheme must be rk4|split-step|leapfrog");
    std::vector<cplx> probes;
    for (double l : cfg.get_list_or("probes", "lambda", {})) probes.push_back(cplx(l, 0.0));
    const auto rep = fields::evolve(fk, s, params, dt, steps, sc, probes, sample_every);

    const auto names = fields::charges(fk, s, params).names;
    std::vector<std::string> cols = {"time"};
    for (const auto& n : names) {
        cols.push_back(n + "_re");
        cols.push_back(n + "_im");
    }
    for (size_t i = 0; i < probes.size(); ++i) {
        cols.push_back("trT" + std::to_string(i) + "_re");
        cols.push_back("trT" + std::to_string(i) + "_im");
    }
    ResultTable table(cols);
    for (size_t i = 0; i < rep.times.size(); ++i) {
        std::vector<std::string> row = {fmt(rep.times[i])};
        for (const cplx& v : rep.charge_series[i]) {
            auto cc = cplx_cells(v);
            row.push_back(cc[0]);
            row.push_back(cc[1]);
        }
        for (const cplx& v : rep.trT_series[i]) {
            auto cc = cplx_cells(v);
            row.push_back(cc[0]);
            row.push_back(cc[1]);
        }
        table.add_row(row);
    }
    std::string summary = "steps=" + std::to_string(steps);
    for (size_t k = 0; k < rep.charge_drift.size(); ++k)
        summary += " drift_" + names[k] + "=" + fmt(rep.charge_drift[k]);
    for (size_t k = 0; k < rep.trT_drift.size(); ++k)
        summary += " drift_trT" + std::to_string(k) + "=" + fmt(rep.trT_drift[k]);
    if (rep.aborted)
        summary += " aborted_at=" + std::to_string(rep.abort_step) + " (" + rep.abort_reason + ")";
    emit(table, opt, cfg, seed, started, t0, summary);

    // Optional final-state snapshot alongside the time series.
    if (cfg.get_or("output", "snapshots", "no") == "yes" && !opt.out_path.empty()) {
        std::vector<std::string> scols = {"x"};
        for (int c = 0; c < int(rep.state.comps.size()); ++c) {
            scols.push_back("comp" + std::to_string(c) + "_re");
            scols.push_back("comp" + std::to_string(c) + "_im");
        }
        ResultTable snap(scols);
        for (int j = 0; j < rep.state.grid.points; ++j) {
            std::vector<std::string> row = {fmt(rep.state.grid.x(j))};
            for (const auto& comp : rep.state.comps) {
                auto cc = cplx_cells(comp[j]);
                row.push_back(cc[0]);
                row.push_back(cc[1]);
            }
            snap.add_row(row);
        }
        std::ofstream out(opt.out_path + ".fields.csv", std::ios::binary);
        out << snap.to_csv();
    }
    return rep.aborted ? 1 : 0;
}

int run_monodromy(const RunConfig& cfg, const RunOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string started = iso8601_now();
    const std::uint64_t seed = effective_seed(cfg, opt);
    SplitMix64 rng(seed);
    const std::string kind = cfg.get("model", "kind");
    const double lo = cfg.get_double_or("probes", "grid_min", 0.2);
    const double hi = cfg.get_double_or("probes", "grid_max", 2.0);
    const int count = int(cfg.get_int_or("probes", "grid_count", 25));
    if (count < 1) throw ConfigError("probes.grid_count must be positive");

    ResultTable table({"lambda", "trT_re", "trT_im"});
    for (int i = 0; i < count; ++i) {
        const double lam = (count == 1) ? lo : lo + (hi - lo) * double(i) / double(count - 1);
        cplx tr;
        if (is_discrete_kind(kind)) {
            const Model m = discrete_model(cfg);
            PhasePoint pt = discrete_init(cfg, m, rng);
            tr = (m.kind == Kind::TodaLinear)
                     ? discrete::linear_lax(pt, std::exp(2.0 * cplx(lam))).trace()
                     : discrete::monodromy(m, pt, lam).trace();
        } else {
            const FieldKind fk = fields::field_kind_from_string(kind);
            fields::FieldState s = field_init(cfg, fk, rng);
            tr = fields::monodromy_numeric(fk, s, field_params(cfg), lam).trace();
        }
        auto cc = cplx_cells(tr);
        table.add_row({fmt(lam), cc[0], cc[1]});
    }
    emit(table, opt, cfg, seed, started, t0, "rows=" + std::to_string(table.rows()));
    return 0;
}

int run_climit(const RunConfig& cfg, const RunOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string started = iso8601_now();
    const std::uint64_t seed = effective_seed(cfg, opt);
    const double L = cfg.get_double_or("climit", "half_length", 1.0);
    const auto x_ast = expr::parse(cfg.get("climit", "x"));
    const auto X_ast = expr::parse(cfg.get("climit", "X"));
    climit::Profile prof{
        [x_ast](double x) { return expr::eval(x_ast, {{"x", cplx(x, 0.0)}}); },
        [X_ast](double x) { return expr::eval(X_ast, {{"x", cplx(x, 0.0)}}); }};
    climit::LimitSchedule sched;
    sched.half_length = L;
    sched.profile = prof;
    for (double d : cfg.get_list_or("climit", "deltas", {0.1, 0.05, 0.025, 0.0125}))
        sched.deltas.push_back(d);
    const int k = int(cfg.get_int_or("climit", "k", 2));
    std::vector<cplx> combo;
    for (double c : cfg.get_list_or("climit", "combo", {})) combo.push_back(cplx(c, 0.0));

    const auto rep = climit::charge_limit(sched, k, combo);
    const auto lax = climit::lax_limit_check(sched, cfg.get_double_or("climit", "lambda", 0.45));
    ResultTable table({"delta", "scaled_re", "scaled_im", "error", "lax_ratio",
                       "monodromy_error", "time_component_error"});
    for (size_t i = 0; i < rep.deltas.size(); ++i) {
        auto cc = cplx_cells(rep.scaled[i]);
        table.add_row({fmt(rep.deltas[i]), cc[0], cc[1], fmt(rep.errors[i]),
                       fmt(lax.expansion_ratio[i]), fmt(lax.monodromy_error[i]),
                       fmt(lax.time_component_error[i])});
    }
    emit(table, opt, cfg, seed, started, t0,
         "k=" + std::to_string(k) + " fitted_order=" + fmt(rep.fitted_order)
             + " continuum=" + fmt(rep.continuum.real()));
    return 0;
}

}  // namespace laxkit::tools
