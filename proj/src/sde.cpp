#include "sympflow/sde.hpp"

#include "sympflow/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

namespace sympflow {

namespace {

inline double ipow(double base, int exp) {
    double out = 1.0;
    for (int i = 0; i < exp; ++i) out *= base;
    return out;
}

}  // namespace

double CompiledPoly::eval(double q, double p) const {
    double acc = 0.0;
    for (const auto& t : terms) acc += t.c * ipow(q, t.q_exp) * ipow(p, t.p_exp);
    return acc;
}

bool CompiledPoly::is_constant() const {
    return terms.empty() || (terms.size() == 1 && terms[0].q_exp == 0 && terms[0].p_exp == 0);
}

double CompiledPoly::constant_value() const {
    return terms.empty() ? 0.0 : terms[0].c;
}

int CompiledPoly::degree() const {
    int deg = -1;
    for (const auto& t : terms) deg = std::max(deg, t.q_exp + t.p_exp);
    return deg;
}

CompiledPoly CompiledPoly::from(const Polynomial& poly) {
    CompiledPoly out;
    out.terms.reserve(poly.terms().size());
    for (const auto& [m, c] : poly.terms()) out.terms.push_back({m.q_exp, m.p_exp, to_double(c)});
    return out;
}

Eigen::Vector2d CompiledField::value(const Eigen::Vector2d& x) const {
    return {fq.eval(x(0), x(1)), fp.eval(x(0), x(1))};
}

Eigen::Matrix2d CompiledField::jacobian(const Eigen::Vector2d& x) const {
    Eigen::Matrix2d j;
    j << dq_q.eval(x(0), x(1)), dq_p.eval(x(0), x(1)), dp_q.eval(x(0), x(1)),
        dp_p.eval(x(0), x(1));
    return j;
}

bool CompiledField::is_constant() const { return fq.is_constant() && fp.is_constant(); }

int CompiledField::degree() const { return std::max(fq.degree(), fp.degree()); }

CompiledField CompiledField::from(const VectorField& field) {
    CompiledField out;
    out.fq = CompiledPoly::from(field.vq);
    out.fp = CompiledPoly::from(field.vp);
    out.dq_q = CompiledPoly::from(field.vq.derivative_q());
    out.dq_p = CompiledPoly::from(field.vq.derivative_p());
    out.dp_q = CompiledPoly::from(field.vp.derivative_q());
    out.dp_p = CompiledPoly::from(field.vp.derivative_p());
    return out;
}

CompiledField CompiledField::constant(const Eigen::Vector2d& v) {
    CompiledField out;
    if (v(0) != 0.0) out.fq.terms.push_back({0, 0, v(0)});
    if (v(1) != 0.0) out.fp.terms.push_back({0, 0, v(1)});
    return out;
}

CompiledField CompiledField::affine(const Eigen::Matrix2d& a, const Eigen::Vector2d& b) {
    CompiledField out;
    auto component = [](double c0, double cq, double cp) {
        CompiledPoly poly;
        if (c0 != 0.0) poly.terms.push_back({0, 0, c0});
        if (cq != 0.0) poly.terms.push_back({1, 0, cq});
        if (cp != 0.0) poly.terms.push_back({0, 1, cp});
        return poly;
    };
    out.fq = component(b(0), a(0, 0), a(0, 1));
    out.fp = component(b(1), a(1, 0), a(1, 1));
    if (a(0, 0) != 0.0) out.dq_q.terms.push_back({0, 0, a(0, 0)});
    if (a(0, 1) != 0.0) out.dq_p.terms.push_back({0, 0, a(0, 1)});
    if (a(1, 0) != 0.0) out.dp_q.terms.push_back({0, 0, a(1, 0)});
    if (a(1, 1) != 0.0) out.dp_p.terms.push_back({0, 0, a(1, 1)});
    return out;
}

int SdeSystem::increment_count() const {
    int n = 0;
    for (const auto& ch : channels) n += ch.is_pair() ? 2 : 1;
    return n;
}

bool SdeSystem::drift_affine() const { return drift.degree() <= 1; }

bool SdeSystem::additive_noise() const {
    for (const auto& ch : channels) {
        if (!ch.sigma.is_constant()) return false;
        if (ch.varsigma && !ch.varsigma->is_constant()) return false;
    }
    return true;
}

Eigen::Matrix2d SdeSystem::drift_matrix() const {
    return drift.jacobian(Eigen::Vector2d::Zero());
}

Eigen::Matrix2d SdeSystem::diffusion_matrix() const {
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    const Eigen::Vector2d origin = Eigen::Vector2d::Zero();
    for (const auto& ch : channels) {
        const Eigen::Vector2d s = ch.sigma.value(origin);
        g += s * s.transpose();
        if (ch.varsigma) {
            const Eigen::Vector2d t = ch.varsigma->value(origin);
            g += t * t.transpose();
        }
    }
    return g;
}

SdeSystem SdeSystem::without_noise() const {
    SdeSystem out;
    out.drift = drift;
    return out;
}

SdeSystem SdeSystem::from_model(const ModelSpec& model) {
    model.validate();
    SdeSystem out;
    out.drift = CompiledField::from(drift_field(model));
    for (const auto& ch : model.channels) {
        Channel compiled;
        compiled.sigma = CompiledField::from(hamiltonian_vector_field(ch.F));
        if (ch.is_pair()) compiled.varsigma = CompiledField::from(hamiltonian_vector_field(*ch.G));
        out.channels.push_back(std::move(compiled));
    }
    return out;
}

SdeSystem SdeSystem::from_linear(const LinearDriftDiffusion& linear) {
    SdeSystem out;
    out.drift = CompiledField::affine(linear.A, linear.b);
    for (const auto& ch : linear.channels) {
        Channel compiled;
        compiled.sigma = CompiledField::constant(ch.sigma);
        if (ch.pair) compiled.varsigma = CompiledField::constant(ch.varsigma);
        out.channels.push_back(std::move(compiled));
    }
    return out;
}

SdeSystem SdeSystem::from_field(const VectorField& field) {
    SdeSystem out;
    out.drift = CompiledField::from(field);
    return out;
}

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive and finite");
    if (!(t_final > 0.0) || !std::isfinite(t_final))
        throw DomainError("t_final must be positive and finite");
    if (dt > t_final) throw DomainError("dt must not exceed t_final");
    if (record_stride < 1) throw DomainError("record_stride must be at least 1");
}

StepPlan plan_steps(double dt, double t_final) {
    // tolerate floating division noise when t_final/dt is an integer
    const double ratio = t_final / dt;
    auto steps = static_cast<std::int64_t>(std::ceil(ratio - 1e-9));
    if (steps < 1) steps = 1;
    double dt_last = t_final - static_cast<double>(steps - 1) * dt;
    if (dt_last <= 0.0) dt_last = dt;
    return {steps, dt_last};
}

namespace {

[[noreturn]] void throw_nonfinite(std::int64_t step, double t) {
    throw NumericError("non-finite state at step " + std::to_string(step) +
                       " (t = " + std::to_string(t) + "); integration aborted");
}

struct StepScratch {
    std::vector<double> increments;
};

/// Shared Euler-Maruyama core. Evaluates every field at the pre-step state;
/// the variational equation re-uses the state increments.
inline void advance(const SdeSystem& system, Eigen::Vector2d& x, Eigen::Matrix2d* jac,
                    double h, std::span<const double> increments) {
    Eigen::Vector2d next = x + system.drift.value(x) * h;
    std::size_t idx = 0;
    for (const auto& ch : system.channels) {
        next += ch.sigma.value(x) * increments[idx++];
        if (ch.varsigma) next += ch.varsigma->value(x) * increments[idx++];
    }
    if (jac) {
        Eigen::Matrix2d jnext = *jac + system.drift.jacobian(x) * (*jac) * h;
        idx = 0;
        for (const auto& ch : system.channels) {
            jnext += ch.sigma.jacobian(x) * (*jac) * increments[idx++];
            if (ch.varsigma) jnext += ch.varsigma->jacobian(x) * (*jac) * increments[idx++];
        }
        *jac = jnext;
    }
    x = next;
}

struct PathResult {
    Eigen::Vector2d state;
    Eigen::Matrix2d jacobian;
};

PathResult integrate_path(const SdeSystem& system, const Eigen::Vector2d& x0,
                          const IntegratorConfig& cfg, std::uint64_t stream_index,
                          Trajectory* record) {
    if (!x0.allFinite()) throw NumericError("non-finite initial state");
    const auto [steps, dt_last] = plan_steps(cfg.dt, cfg.t_final);
    GaussianStream stream(cfg.seed, stream_index);
    const int n_inc = system.increment_count();
    std::vector<double> increments(static_cast<std::size_t>(n_inc));

    Eigen::Vector2d x = x0;
    Eigen::Matrix2d jac = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d* jac_ptr = cfg.with_jacobian ? &jac : nullptr;

    if (record) {
        record->times.push_back(0.0);
        record->states.push_back(x);
        if (cfg.with_jacobian) record->jacobians.push_back(jac);
    }

    const double sq_dt = std::sqrt(cfg.dt);
    const double sq_last = std::sqrt(dt_last);
    for (std::int64_t k = 1; k <= steps; ++k) {
        const bool last = (k == steps);
        const double h = last ? dt_last : cfg.dt;
        const double sq = last ? sq_last : sq_dt;
        for (int i = 0; i < n_inc; ++i) increments[i] = sq * stream.gaussian();
        advance(system, x, jac_ptr, h, increments);
        const double t = last ? cfg.t_final : static_cast<double>(k) * cfg.dt;
        if (!x.allFinite()) throw_nonfinite(k, t);
        if (record && (last || (k % cfg.record_stride == 0))) {
            record->times.push_back(t);
            record->states.push_back(x);
            if (cfg.with_jacobian) record->jacobians.push_back(jac);
        }
    }
    return {x, jac};
}

}  // namespace

Eigen::Vector2d em_step(const SdeSystem& system, const Eigen::Vector2d& state, double dt,
                        std::span<const double> increments) {
    if (!state.allFinite()) throw NumericError("non-finite state passed to em_step");
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw DomainError("dt must be nonnegative and finite");
    if (static_cast<int>(increments.size()) != system.increment_count())
        throw DomainError("em_step expected " + std::to_string(system.increment_count()) +
                          " increments, got " + std::to_string(increments.size()));
    for (double w : increments)
        if (!std::isfinite(w)) throw NumericError("non-finite increment passed to em_step");
    Eigen::Vector2d x = state;
    advance(system, x, nullptr, dt, increments);
    if (!x.allFinite()) throw_nonfinite(1, dt);
    return x;
}

Eigen::Vector2d em_step(const ModelSpec& model, const Eigen::Vector2d& state, double dt,
                        std::span<const double> increments) {
    return em_step(SdeSystem::from_model(model), state, dt, increments);
}

Trajectory simulate_path(const SdeSystem& system, const Eigen::Vector2d& x0,
                         const IntegratorConfig& cfg, std::uint64_t path_index) {
    cfg.validate();
    Trajectory traj;
    integrate_path(system, x0, cfg, path_index, &traj);
    return traj;
}

EnsembleSummary simulate_ensemble(const SdeSystem& system, const Eigen::Vector2d& x0,
                                  const IntegratorConfig& cfg, std::int64_t path_count,
                                  double expected_det_j, int workers) {
    cfg.validate();
    if (path_count < 2) throw DomainError("ensemble needs at least 2 paths");

    std::vector<Eigen::Vector2d> terminal(static_cast<std::size_t>(path_count));
    std::vector<double> det_j(cfg.with_jacobian ? static_cast<std::size_t>(path_count) : 0);
    std::vector<std::string> failures(static_cast<std::size_t>(path_count));

    int n_workers = workers > 0 ? workers
                                : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    n_workers = static_cast<int>(std::min<std::int64_t>(n_workers, path_count));

    auto run_range = [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            try {
                const PathResult res =
                    integrate_path(system, x0, cfg, static_cast<std::uint64_t>(i), nullptr);
                terminal[static_cast<std::size_t>(i)] = res.state;
                if (cfg.with_jacobian)
                    det_j[static_cast<std::size_t>(i)] = res.jacobian.determinant();
            } catch (const std::exception& e) {
                failures[static_cast<std::size_t>(i)] = e.what();
            }
        }
    };

    if (n_workers <= 1) {
        run_range(0, path_count);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        const std::int64_t chunk = (path_count + n_workers - 1) / n_workers;
        for (int w = 0; w < n_workers; ++w) {
            const std::int64_t begin = w * chunk;
            const std::int64_t end = std::min(path_count, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    for (std::int64_t i = 0; i < path_count; ++i) {
        if (!failures[static_cast<std::size_t>(i)].empty())
            throw NumericError("path with seed index " + std::to_string(i) +
                               " failed: " + failures[static_cast<std::size_t>(i)]);
    }
    return summarize_terminal_states(terminal, det_j, cfg.t_final, expected_det_j);
}

EnsembleSummary summarize_terminal_states(const std::vector<Eigen::Vector2d>& terminal,
                                          const std::vector<double>& det_j, double t_final,
                                          double expected_det_j) {
    if (terminal.size() < 2) throw DomainError("ensemble needs at least 2 paths");
    EnsembleSummary out;
    out.path_count = static_cast<std::int64_t>(terminal.size());
    out.t_final = t_final;

    const double n = static_cast<double>(terminal.size());
    Eigen::Vector2d sum = Eigen::Vector2d::Zero();
    for (const auto& x : terminal) sum += x;
    out.mean = sum / n;

    // central second and fourth moments, fixed summation order
    double c_qq = 0, c_qp = 0, c_pp = 0;
    double m4_qq = 0, m4_qp = 0, m4_pp = 0;
    for (const auto& x : terminal) {
        const double dq = x(0) - out.mean(0);
        const double dp = x(1) - out.mean(1);
        c_qq += dq * dq;
        c_qp += dq * dp;
        c_pp += dp * dp;
        m4_qq += dq * dq * dq * dq;
        m4_qp += dq * dq * dp * dp;
        m4_pp += dp * dp * dp * dp;
    }
    const double denom = n - 1.0;
    out.covariance << c_qq / denom, c_qp / denom, c_qp / denom, c_pp / denom;

    auto se = [&](double m4, double c2) {
        const double var = std::max(0.0, m4 / n - (c2 / n) * (c2 / n));
        return std::sqrt(var / n);
    };
    const double se_qq = se(m4_qq, c_qq);
    const double se_qp = se(m4_qp, c_qp);
    const double se_pp = se(m4_pp, c_pp);
    out.covariance_se << se_qq, se_qp, se_qp, se_pp;
    out.mean_se = Eigen::Vector2d(std::sqrt(out.covariance(0, 0) / n),
                                  std::sqrt(out.covariance(1, 1) / n));

    if (!det_j.empty()) {
        std::vector<double> err(det_j.size());
        for (std::size_t i = 0; i < det_j.size(); ++i)
            err[i] = std::abs(det_j[i] - expected_det_j);
        std::sort(err.begin(), err.end());
        const std::size_t sz = err.size();
        const double median =
            (sz % 2 == 1) ? err[sz / 2] : 0.5 * (err[sz / 2 - 1] + err[sz / 2]);
        std::size_t i95 = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(sz)));
        i95 = std::min(std::max<std::size_t>(i95, 1), sz) - 1;
        out.det_j_stats = {median, err[i95]};
    }
    return out;
}

std::string ensemble_report_text(const EnsembleSummary& s) {
    std::ostringstream os;
    os.precision(12);
    os << "ensemble summary: " << s.path_count << " paths at t = " << s.t_final << "\n";
    os << "mean      = (" << s.mean(0) << ", " << s.mean(1) << ") +/- (" << s.mean_se(0)
       << ", " << s.mean_se(1) << ")\n";
    os << "cov qq    = " << s.covariance(0, 0) << " +/- " << s.covariance_se(0, 0) << "\n";
    os << "cov qp    = " << s.covariance(0, 1) << " +/- " << s.covariance_se(0, 1) << "\n";
    os << "cov pp    = " << s.covariance(1, 1) << " +/- " << s.covariance_se(1, 1) << "\n";
    if (s.det_j_stats)
        os << "|det J - expected|: median = " << s.det_j_stats->first
           << ", p95 = " << s.det_j_stats->second << "\n";
    os << "[machine]\n";
    os << "paths=" << s.path_count << "\n";
    os << "t_final=" << s.t_final << "\n";
    os << "mean_q=" << s.mean(0) << "\nmean_p=" << s.mean(1) << "\n";
    os << "se_mean_q=" << s.mean_se(0) << "\nse_mean_p=" << s.mean_se(1) << "\n";
    os << "cov_qq=" << s.covariance(0, 0) << "\ncov_qp=" << s.covariance(0, 1)
       << "\ncov_pp=" << s.covariance(1, 1) << "\n";
    os << "se_cov_qq=" << s.covariance_se(0, 0) << "\nse_cov_qp=" << s.covariance_se(0, 1)
       << "\nse_cov_pp=" << s.covariance_se(1, 1) << "\n";
    if (s.det_j_stats) {
        os << "detj_median_err=" << s.det_j_stats->first << "\n";
        os << "detj_p95_err=" << s.det_j_stats->second << "\n";
    }
    return os.str();
}

std::pair<Eigen::Matrix2d, Eigen::Matrix2d> linear_transition(const Eigen::Matrix2d& a,
                                                              const Eigen::Matrix2d& g,
                                                              double h) {
    Eigen::Matrix4d block = Eigen::Matrix4d::Zero();
    block.topLeftCorner<2, 2>() = a;
    block.topRightCorner<2, 2>() = g;
    block.bottomRightCorner<2, 2>() = -a.transpose();
    const Eigen::Matrix4d e = (block * h).exp();
    const Eigen::Matrix2d phi = e.topLeftCorner<2, 2>();
    Eigen::Matrix2d gram = e.topRightCorner<2, 2>() * phi.transpose();
    gram = 0.5 * (gram + gram.transpose()).eval();
    return {phi, gram};
}

std::pair<Eigen::Vector2d, Eigen::Matrix2d> exact_linear_moments(
    const Eigen::Matrix2d& a, const Eigen::Matrix2d& g, const Eigen::Vector2d& mean0,
    const Eigen::Matrix2d& cov0, double t) {
    if (t < 0.0) throw DomainError("time must be nonnegative");
    Eigen::Vector2d mean = mean0;
    Eigen::Matrix2d cov = cov0;
    if (t == 0.0) return {mean, cov};

    // march in bounded chunks so the augmented exponential stays well scaled
    const double chunk = 1.0;
    std::optional<std::pair<Eigen::Matrix2d, Eigen::Matrix2d>> cached;
    double remaining = t;
    while (remaining > 0.0) {
        const double h = std::min(chunk, remaining);
        std::pair<Eigen::Matrix2d, Eigen::Matrix2d> tr;
        if (h == chunk) {
            if (!cached) cached = linear_transition(a, g, chunk);
            tr = *cached;
        } else {
            tr = linear_transition(a, g, h);
        }
        mean = tr.first * mean;
        cov = (tr.first * cov * tr.first.transpose() + tr.second).eval();
        cov = (0.5 * (cov + cov.transpose())).eval();
        remaining -= h;
    }
    return {mean, cov};
}

void write_trajectory_csv_header(std::ostream& os, bool with_jacobian) {
    os << "path,t,q,p";
    if (with_jacobian) os << ",J11,J12,J21,J22,detJ";
    os << "\n";
}

void write_trajectory_csv(std::ostream& os, std::int64_t path_index, const Trajectory& traj) {
    const bool with_jacobian = !traj.jacobians.empty();
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << ',' << buf;
    };
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        os << path_index;
        put(traj.times[i]);
        put(traj.states[i](0));
        put(traj.states[i](1));
        if (with_jacobian) {
            const auto& j = traj.jacobians[i];
            put(j(0, 0));
            put(j(0, 1));
            put(j(1, 0));
            put(j(1, 1));
            put(j.determinant());
        }
        os << '\n';
    }
}

}  // namespace sympflow
