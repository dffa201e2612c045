#include "rblab/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rblab::sdp {

namespace {

using Blocks = std::vector<CMat>;

double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += (a[k].adjoint() * b[k]).trace().real();
  return s;
}

double frob(const Blocks& a) {
  double s = 0.0;
  for (const auto& m : a) s += m.squaredNorm();
  return std::sqrt(s);
}

// <A_k, Y> for every constraint; Y need not be Hermitian.
RVec apply_constraints(const Problem& p, const Blocks& y) {
  RVec out(static_cast<Eigen::Index>(p.constraints.size()));
  for (size_t k = 0; k < p.constraints.size(); ++k) {
    cplx s = 0.0;
    for (const auto& e : p.constraints[k]) s += e.value * y[static_cast<size_t>(e.block)](e.col, e.row);
    out(static_cast<Eigen::Index>(k)) = s.real();
  }
  return out;
}

Blocks adjoint_constraints(const Problem& p, const RVec& y) {
  Blocks out;
  for (int n : p.block_sizes) out.push_back(CMat::Zero(n, n));
  for (size_t k = 0; k < p.constraints.size(); ++k) {
    const double yk = y(static_cast<Eigen::Index>(k));
    for (const auto& e : p.constraints[k]) out[static_cast<size_t>(e.block)](e.row, e.col) += yk * e.value;
  }
  return out;
}

CMat herm(const CMat& m) { return 0.5 * (m + m.adjoint()); }

// Largest alpha in (0, 1] keeping X + alpha dX positive definite.
double max_step(const CMat& chol_lower, const CMat& dx) {
  const CMat linv = chol_lower.triangularView<Eigen::Lower>().solve(CMat::Identity(dx.rows(), dx.cols()));
  const CMat w = herm(linv * dx * linv.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(w, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

}  // namespace

Result solve(const Problem& p, const Options& opt) {
  const size_t nb = p.block_sizes.size();
  const auto m = static_cast<Eigen::Index>(p.constraints.size());
  if (p.objective.size() != nb || p.rhs.size() != m) throw DomainError("sdp::solve: inconsistent problem");
  int total_dim = 0;
  for (int n : p.block_sizes) total_dim += n;

  Blocks x, s;
  for (int n : p.block_sizes) {
    x.push_back(CMat::Identity(n, n));
    s.push_back(CMat::Identity(n, n));
  }
  RVec y = RVec::Zero(m);
  const double b_norm = p.rhs.norm();
  const double c_norm = frob(p.objective);

  Result res;
  for (int it = 0; it < opt.max_iterations; ++it) {
    res.iterations = it;
    const RVec rp = p.rhs - apply_constraints(p, x);
    Blocks aty = adjoint_constraints(p, y);
    Blocks rd(nb);
    for (size_t k = 0; k < nb; ++k) rd[k] = p.objective[k] - aty[k] - s[k];

    const double pobj = inner(p.objective, x);
    const double dobj = p.rhs.dot(y);
    res.primal_objective = pobj;
    res.dual_objective = dobj;
    res.primal_infeasibility = rp.norm() / (1.0 + b_norm);
    res.dual_infeasibility = frob(rd) / (1.0 + c_norm);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (gap <= opt.gap_tol && res.primal_infeasibility <= opt.feasibility_tol &&
        res.dual_infeasibility <= opt.feasibility_tol) {
      res.converged = true;
      break;
    }
    // On numerical breakdown the current iterate is accepted at the looser tolerance.
    auto near_optimal = [&] {
      res.converged = gap <= opt.breakdown_tol && res.primal_infeasibility <= opt.breakdown_tol &&
                      res.dual_infeasibility <= opt.breakdown_tol;
      return res.converged;
    };
    const double mu = inner(x, s) / total_dim;

    Blocks sinv(nb), lx(nb), ls(nb);
    for (size_t k = 0; k < nb; ++k) {
      Eigen::LLT<CMat> cs(s[k]);
      Eigen::LLT<CMat> cx(x[k]);
      if (cs.info() != Eigen::Success || cx.info() != Eigen::Success) {
        if (!near_optimal()) throw NumericError("sdp::solve: iterate lost positive definiteness");
        break;
      }
      sinv[k] = herm(cs.solve(CMat::Identity(s[k].rows(), s[k].cols())));
      lx[k] = cx.matrixL();
      ls[k] = cs.matrixL();
    }
    if (res.converged) break;

    // Schur complement M_ij = Re Tr[A_i X A_j S^-1].
    RMat schur = RMat::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i; j < m; ++j) {
        cplx acc = 0.0;
        for (const auto& ei : p.constraints[static_cast<size_t>(i)])
          for (const auto& ej : p.constraints[static_cast<size_t>(j)]) {
            if (ei.block != ej.block) continue;
            const auto b = static_cast<size_t>(ei.block);
            acc += ei.value * x[b](ei.col, ej.row) * ej.value * sinv[b](ej.col, ei.row);
          }
        schur(i, j) = acc.real();
        schur(j, i) = acc.real();
      }
    // M is positive definite in exact arithmetic; near the optimum rounding can
    // break that, so a small diagonal shift is added before giving up.
    Eigen::LDLT<RMat> schur_fact(schur);
    for (double shift = 1e-14; schur_fact.info() != Eigen::Success || !schur_fact.isPositive(); shift *= 100.0) {
      if (shift > 1e-6) {
        if (!near_optimal()) throw NumericError("sdp::solve: Schur complement factorization failed");
        break;
      }
      const double scale = std::max(schur.diagonal().cwiseAbs().maxCoeff(), 1.0);
      schur_fact.compute(schur + (shift * scale) * RMat::Identity(m, m));
    }
    if (res.converged) break;

    // Direction for target sigma*mu with an optional second-order term.
    auto direction = [&](double target, const Blocks* corr, Blocks& dx, Blocks& ds, RVec& dy) {
      Blocks base(nb);
      for (size_t k = 0; k < nb; ++k) {
        CMat t = target * sinv[k] - x[k] - x[k] * rd[k] * sinv[k];
        if (corr) t -= (*corr)[k] * sinv[k];
        base[k] = t;
      }
      dy = schur_fact.solve(rp - apply_constraints(p, base));
      const Blocks atdy = adjoint_constraints(p, dy);
      dx.assign(nb, CMat());
      ds.assign(nb, CMat());
      for (size_t k = 0; k < nb; ++k) {
        ds[k] = rd[k] - atdy[k];
        dx[k] = herm(base[k] + x[k] * atdy[k] * sinv[k]);
      }
    };
    auto step_lengths = [&](const Blocks& dx, const Blocks& ds, double& ap, double& ad) {
      ap = 1.0;
      ad = 1.0;
      for (size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, max_step(lx[k], dx[k]));
        ad = std::min(ad, max_step(ls[k], ds[k]));
      }
    };

    Blocks dxa, dsa;
    RVec dya;
    direction(0.0, nullptr, dxa, dsa, dya);
    double apa = 0.0, ada = 0.0;
    step_lengths(dxa, dsa, apa, ada);
    Blocks xa(nb), sa(nb);
    for (size_t k = 0; k < nb; ++k) {
      xa[k] = x[k] + apa * dxa[k];
      sa[k] = s[k] + ada * dsa[k];
    }
    const double mu_aff = inner(xa, sa) / total_dim;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    Blocks corr(nb);
    for (size_t k = 0; k < nb; ++k) corr[k] = dxa[k] * dsa[k];
    Blocks dx, ds;
    RVec dy;
    direction(sigma * mu, &corr, dx, ds, dy);
    double ap = 0.0, ad = 0.0;
    step_lengths(dx, ds, ap, ad);
    ap = std::min(1.0, 0.95 * ap);
    ad = std::min(1.0, 0.95 * ad);
    for (size_t k = 0; k < nb; ++k) {
      x[k] = herm(x[k] + ap * dx[k]);
      s[k] = herm(s[k] + ad * ds[k]);
    }
    y += ad * dy;
  }
  res.x = std::move(x);
  res.s = std::move(s);
  res.y = std::move(y);
  return res;
}

}  // namespace rblab::sdp
