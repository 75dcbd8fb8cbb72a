#include "flipblur/krylov.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "flipblur/error.hpp"
#include "flipblur/random.hpp"

namespace flipblur {

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Discrepancy: return "discrepancy";
    case StopReason::MaxIter: return "max_iter";
    case StopReason::Breakdown: return "breakdown";
  }
  return "unknown";
}

std::string_view to_string(Breakdown breakdown) {
  switch (breakdown) {
    case Breakdown::None: return "none";
    case Breakdown::Lucky: return "lucky";
    case Breakdown::Unlucky: return "unlucky";
  }
  return "unknown";
}

void StoppingRule::validate() const {
  if (max_iter < 1) throw Error(ErrorKind::UsageError, "max_iter must be at least 1");
  if (discrepancy) {
    if (!(discrepancy->delta >= 0.0) || !std::isfinite(discrepancy->delta))
      throw Error(ErrorKind::UsageError, "discrepancy delta must be finite and >= 0");
    if (!(discrepancy->tau >= 1.0) || !std::isfinite(discrepancy->tau))
      throw Error(ErrorKind::UsageError, "discrepancy tau must be >= 1");
  }
}

double discrepancy_delta(double noise_level, double blurred_exact_norm) {
  return noise_level * blurred_exact_norm;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Bookkeeping shared by both solvers: residual history, RRE against the
// truth, discrepancy detection and iterate snapshots.
class Recorder {
 public:
  Recorder(const StoppingRule& rule, const std::optional<Eigen::VectorXd>& truth, double b_norm)
      : rule_(rule), truth_(truth), b_norm_(b_norm) {
    if (truth_) {
      truth_norm_ = truth_->norm();
      if (truth_norm_ == 0.0) throw Error(ErrorKind::UndefinedRre, "truth has zero norm");
    }
  }

  // True when observe() will need x_k for this residual.
  bool wants_iterate(double residual, bool last) const {
    return last || truth_ || rule_.keep_all_iterates ||
           (!report_.history.discrepancy_iter && meets_discrepancy(residual));
  }

  // Records iteration k. Returns true when the solver must stop.
  bool observe(std::size_t k, double residual, const Eigen::VectorXd* x) {
    if (!std::isfinite(residual))
      throw Error(ErrorKind::NumericalFailure,
                  "non-finite residual at iteration " + std::to_string(k));
    auto& h = report_.history;
    h.residual_norms.push_back(residual);
    if (x && rule_.keep_all_iterates) report_.iterates.push_back(*x);
    if (truth_ && x) {
      const double rre = (*x - *truth_).norm() / truth_norm_;
      if (!std::isfinite(rre))
        throw Error(ErrorKind::NumericalFailure, "non-finite iterate at iteration " + std::to_string(k));
      h.rre_per_iter.push_back(rre);
      if (!h.best_iter || rre < h.rre_per_iter[*h.best_iter]) {
        h.best_iter = k;
        report_.solution_at_best = *x;
      }
    }
    if (!h.discrepancy_iter && meets_discrepancy(residual)) {
      h.discrepancy_iter = k;
      if (x) report_.solution_at_discrepancy = *x;
      if (rule_.stop_at_discrepancy) {
        h.stopped_by = StopReason::Discrepancy;
        return true;
      }
    }
    return false;
  }

  double lucky_threshold() const { return std::sqrt(kEps) * b_norm_; }

  SolveReport finish(Eigen::VectorXd solution) {
    report_.solution = std::move(solution);
    return std::move(report_);
  }

  IterationHistory& history() { return report_.history; }

 private:
  bool meets_discrepancy(double residual) const {
    return rule_.discrepancy && residual <= rule_.discrepancy->tau * rule_.discrepancy->delta;
  }

  const StoppingRule& rule_;
  const std::optional<Eigen::VectorXd>& truth_;
  double truth_norm_ = 0.0;
  double b_norm_;
  SolveReport report_;
};

void check_inputs(const Eigen::VectorXd& b, const StoppingRule& rule,
                  const std::optional<Eigen::VectorXd>& truth) {
  rule.validate();
  if (b.size() == 0) throw Error(ErrorKind::DimensionError, "empty right-hand side");
  if (!b.allFinite()) throw Error(ErrorKind::NumericalFailure, "non-finite right-hand side");
  if (truth && truth->size() != b.size())
    throw Error(ErrorKind::DimensionError, "truth length does not match right-hand side");
}

}  // namespace

SolveReport gmres(const LinearOperator& a, const Eigen::VectorXd& b, const StoppingRule& rule,
                  const std::optional<Eigen::VectorXd>& truth) {
  check_inputs(b, rule, truth);
  const Eigen::Index n = b.size();
  const double beta = b.norm();
  Recorder rec(rule, truth, beta);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (rec.observe(0, beta, &x) || beta == 0.0) {
    if (beta == 0.0 && rec.history().stopped_by != StopReason::Discrepancy) {
      rec.history().stopped_by = StopReason::Breakdown;
      rec.history().breakdown = Breakdown::Lucky;
    }
    return rec.finish(std::move(x));
  }

  const auto max_iter = static_cast<Eigen::Index>(rule.max_iter);
  std::vector<Eigen::VectorXd> basis;
  basis.reserve(static_cast<std::size_t>(std::min(max_iter, n) + 1));
  basis.push_back(b / beta);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(max_iter + 1, max_iter);
  Eigen::VectorXd cs = Eigen::VectorXd::Zero(max_iter);
  Eigen::VectorXd sn = Eigen::VectorXd::Zero(max_iter);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(max_iter + 1);
  g(0) = beta;

  // x_k = V_k y_k with R y = g on the rotated Hessenberg.
  auto iterate = [&](Eigen::Index k) {
    const Eigen::VectorXd y = hess.topLeftCorner(k, k)
                                  .triangularView<Eigen::Upper>()
                                  .solve(g.head(k));
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < k; ++i) out += y(i) * basis[static_cast<std::size_t>(i)];
    return out;
  };

  Eigen::VectorXd w(n);
  for (Eigen::Index k = 0; k < max_iter; ++k) {
    a(basis[static_cast<std::size_t>(k)], w);
    if (!w.allFinite()) throw Error(ErrorKind::NumericalFailure, "operator produced non-finite values");
    const double w_norm = w.norm();
    for (Eigen::Index i = 0; i <= k; ++i) {
      hess(i, k) = w.dot(basis[static_cast<std::size_t>(i)]);
      w -= hess(i, k) * basis[static_cast<std::size_t>(i)];
    }
    const double h_next = w.norm();
    hess(k + 1, k) = h_next;

    for (Eigen::Index i = 0; i < k; ++i) {
      const double t = cs(i) * hess(i, k) + sn(i) * hess(i + 1, k);
      hess(i + 1, k) = -sn(i) * hess(i, k) + cs(i) * hess(i + 1, k);
      hess(i, k) = t;
    }
    const double r = std::hypot(hess(k, k), hess(k + 1, k));
    if (r == 0.0) {
      // A maps the Krylov space into the span of the earlier basis vectors
      // and the least-squares problem cannot be extended.
      rec.history().stopped_by = StopReason::Breakdown;
      rec.history().breakdown = Breakdown::Unlucky;
      return rec.finish(k > 0 ? iterate(k) : Eigen::VectorXd(Eigen::VectorXd::Zero(n)));
    }
    cs(k) = hess(k, k) / r;
    sn(k) = hess(k + 1, k) / r;
    hess(k, k) = r;
    hess(k + 1, k) = 0.0;
    g(k + 1) = -sn(k) * g(k);
    g(k) = cs(k) * g(k);
    const double residual = std::abs(g(k + 1));

    const bool breakdown = h_next <= 10.0 * kEps * w_norm;
    const bool last = breakdown || k + 1 == max_iter;
    if (rec.wants_iterate(residual, last)) x = iterate(k + 1);
    if (rec.observe(static_cast<std::size_t>(k + 1), residual,
                    rec.wants_iterate(residual, last) ? &x : nullptr))
      return rec.finish(std::move(x));
    if (breakdown) {
      rec.history().stopped_by = StopReason::Breakdown;
      rec.history().breakdown =
          residual <= rec.lucky_threshold() ? Breakdown::Lucky : Breakdown::Unlucky;
      return rec.finish(std::move(x));
    }
    basis.push_back(w / h_next);
  }
  rec.history().stopped_by = StopReason::MaxIter;
  return rec.finish(std::move(x));
}

namespace {

void probe_symmetry(const LinearOperator& a, Eigen::Index n, const MinresOptions& options) {
  GaussianStream gauss(options.probe_seed);
  Eigen::VectorXd x(n), y(n), ax(n), ay(n);
  for (int pair = 0; pair < options.probe_pairs; ++pair) {
    for (Eigen::Index i = 0; i < n; ++i) x(i) = gauss.next();
    for (Eigen::Index i = 0; i < n; ++i) y(i) = gauss.next();
    a(x, ax);
    a(y, ay);
    const double lhs = ax.dot(y);
    const double rhs = x.dot(ay);
    const double scale = ax.norm() * y.norm() + x.norm() * ay.norm();
    if (std::abs(lhs - rhs) > options.probe_tolerance * scale)
      throw Error(ErrorKind::NotSymmetric,
                  "<Ax,y> = " + std::to_string(lhs) + " but <x,Ay> = " + std::to_string(rhs));
  }
}

}  // namespace

SolveReport minres(const LinearOperator& a, const Eigen::VectorXd& b, const StoppingRule& rule,
                   const std::optional<Eigen::VectorXd>& truth, const MinresOptions& options) {
  check_inputs(b, rule, truth);
  const Eigen::Index n = b.size();
  if (options.probe_symmetry) probe_symmetry(a, n, options);

  const double beta1 = b.norm();
  Recorder rec(rule, truth, beta1);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (rec.observe(0, beta1, &x) || beta1 == 0.0) {
    if (beta1 == 0.0 && rec.history().stopped_by != StopReason::Discrepancy) {
      rec.history().stopped_by = StopReason::Breakdown;
      rec.history().breakdown = Breakdown::Lucky;
    }
    return rec.finish(std::move(x));
  }

  // Paige-Saunders recurrences, unpreconditioned.
  Eigen::VectorXd r1 = b, r2 = b, y = b, v(n), av(n);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n), w1(n), w2 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd aw = Eigen::VectorXd::Zero(n), aw1(n), aw2 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd ax = Eigen::VectorXd::Zero(n);
  double beta = beta1, oldb = 0.0, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;

  for (std::size_t k = 1; k <= rule.max_iter; ++k) {
    v = y / beta;
    a(v, av);
    if (!av.allFinite()) throw Error(ErrorKind::NumericalFailure, "operator produced non-finite values");
    y = av;
    if (k >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    oldb = beta;
    beta = y.norm();

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), kEps);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    aw1 = aw2;
    aw2 = aw;
    aw = (av - oldeps * aw1 - delta * aw2) / gamma;
    x += phi * w;
    ax += phi * aw;
    const double residual = (b - ax).norm();

    const bool breakdown = beta <= 10.0 * kEps * av.norm();
    if (rec.observe(k, residual, &x)) return rec.finish(std::move(x));
    if (breakdown) {
      rec.history().stopped_by = StopReason::Breakdown;
      rec.history().breakdown =
          residual <= rec.lucky_threshold() ? Breakdown::Lucky : Breakdown::Unlucky;
      return rec.finish(std::move(x));
    }
  }
  rec.history().stopped_by = StopReason::MaxIter;
  return rec.finish(std::move(x));
}

void write_history_csv(std::ostream& os, const IterationHistory& history) {
  os << "iter,residual_norm,rre\n";
  char buf[64];
  for (std::size_t k = 0; k < history.residual_norms.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,", k, history.residual_norms[k]);
    os << buf;
    if (k < history.rre_per_iter.size()) {
      std::snprintf(buf, sizeof buf, "%.17g", history.rre_per_iter[k]);
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace flipblur
