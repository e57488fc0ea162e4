#include "nil/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace nil {

namespace {

struct Smo {
  const std::vector<std::vector<double>>& x;
  const std::vector<double>& y;
  const std::vector<double>& cbound;
  std::vector<double> kmat;
  std::vector<double> alpha;
  std::vector<double> err;  // E_i = h(x_i) - y_i
  double b = 0.0;
  size_t n;
  double tol;

  Smo(const std::vector<std::vector<double>>& x_, const std::vector<double>& y_,
      const std::vector<double>& c_, const KernelParams& k, double tol_)
      : x(x_), y(y_), cbound(c_), n(x_.size()), tol(tol_) {
    kmat.resize(n * n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i; j < n; ++j)
        kmat[i * n + j] = kmat[j * n + i] = kernel(k, x[i], x[j]);
    alpha.assign(n, 0.0);
    err.resize(n);
    for (size_t i = 0; i < n; ++i) err[i] = -y[i];
  }

  double K(size_t i, size_t j) const { return kmat[i * n + j]; }

  bool step(size_t i, size_t j) {
    if (i == j) return false;
    double a1 = alpha[i], a2 = alpha[j];
    double y1 = y[i], y2 = y[j];
    double c1 = cbound[i], c2 = cbound[j];
    double L, H;
    if (y1 != y2) {
      L = std::max(0.0, a2 - a1);
      H = std::min(c2, c1 + a2 - a1);
    } else {
      L = std::max(0.0, a1 + a2 - c1);
      H = std::min(c2, a1 + a2);
    }
    if (!(H - L > 0.0)) return false;
    double e1 = err[i], e2 = err[j];
    double eta = K(i, i) + K(j, j) - 2.0 * K(i, j);
    double a2new;
    if (eta > 0.0) {
      a2new = a2 + y2 * (e1 - e2) / eta;
      if (a2new < L)
        a2new = L;
      else if (a2new > H)
        a2new = H;
    } else {
      // flat or concave direction (duplicate points): move to the better end
      double f1 = y1 * (e1 + b) - a1 * K(i, i) - y1 * y2 * a2 * K(i, j);
      double f2 = y2 * (e2 + b) - y1 * y2 * a1 * K(i, j) - a2 * K(j, j);
      double l1 = a1 + y1 * y2 * (a2 - L);
      double h1 = a1 + y1 * y2 * (a2 - H);
      double objL = l1 * f1 + L * f2 + 0.5 * l1 * l1 * K(i, i) +
                    0.5 * L * L * K(j, j) + y1 * y2 * L * l1 * K(i, j);
      double objH = h1 * f1 + H * f2 + 0.5 * h1 * h1 * K(i, i) +
                    0.5 * H * H * K(j, j) + y1 * y2 * H * h1 * K(i, j);
      if (objL < objH - 1e-12 * (std::abs(objL) + std::abs(objH)))
        a2new = L;
      else if (objH < objL - 1e-12 * (std::abs(objL) + std::abs(objH)))
        a2new = H;
      else
        return false;
    }
    if (std::abs(a2new - a2) < 1e-10 * (a2new + a2 + 1e-10)) return false;

    double a1new = a1 + y1 * y2 * (a2 - a2new);
    if (a1new < 0.0) a1new = 0.0;
    if (a1new > c1) a1new = c1;
    double d1 = a1new - a1, d2 = a2new - a2;
    double b1 = b - e1 - y1 * d1 * K(i, i) - y2 * d2 * K(i, j);
    double b2 = b - e2 - y1 * d1 * K(i, j) - y2 * d2 * K(j, j);
    double bnew;
    if (a1new > 0.0 && a1new < c1)
      bnew = b1;
    else if (a2new > 0.0 && a2new < c2)
      bnew = b2;
    else
      bnew = 0.5 * (b1 + b2);
    double db = bnew - b;
    alpha[i] = a1new;
    alpha[j] = a2new;
    b = bnew;
    for (size_t t = 0; t < n; ++t)
      err[t] += y1 * d1 * K(i, t) + y2 * d2 * K(j, t) + db;
    return true;
  }

  // alpha[t] may move in the +y_t direction (up) or -y_t direction (down)
  bool in_up(size_t t) const {
    return y[t] > 0.0 ? alpha[t] < cbound[t] : alpha[t] > 0.0;
  }
  bool in_down(size_t t) const {
    return y[t] > 0.0 ? alpha[t] > 0.0 : alpha[t] < cbound[t];
  }

  // KKT gap of the maximal violating pair; err differences cancel the bias
  double gap() const {
    double up = std::numeric_limits<double>::infinity();
    double low = -std::numeric_limits<double>::infinity();
    for (size_t t = 0; t < n; ++t) {
      if (in_up(t)) up = std::min(up, err[t]);
      if (in_down(t)) low = std::max(low, err[t]);
    }
    if (!(up < std::numeric_limits<double>::infinity()) ||
        !(low > -std::numeric_limits<double>::infinity()))
      return 0.0;
    return low - up;
  }

  // One working-set move: the most violating point paired with the partner
  // of largest second-order gain. False once the gap closes or no feasible
  // pair makes numerical progress.
  bool iterate() {
    size_t i = n, jmax = n;
    double up = std::numeric_limits<double>::infinity();
    double low = -std::numeric_limits<double>::infinity();
    for (size_t t = 0; t < n; ++t) {
      if (in_up(t) && err[t] < up) {
        up = err[t];
        i = t;
      }
      if (in_down(t) && err[t] > low) {
        low = err[t];
        jmax = t;
      }
    }
    if (i >= n || jmax >= n || low - up < tol) return false;
    size_t j = n;
    double best = -1.0;
    for (size_t t = 0; t < n; ++t) {
      if (!in_down(t) || !(err[t] > up)) continue;
      double diff = err[t] - up;
      double a = K(i, i) + K(t, t) - 2.0 * K(i, t);
      if (!(a > 1e-12)) a = 1e-12;
      double gain = diff * diff / a;
      if (gain > best) {
        best = gain;
        j = t;
      }
    }
    if (j < n && step(i, j)) return true;
    if (jmax != j && step(i, jmax)) return true;
    // tie-broken fallback: pair the worst endpoint with anything that moves
    for (size_t t = 0; t < n; ++t)
      if (t != i && (step(i, t) || step(t, jmax))) return true;
    return false;
  }

  // realize a face move as two-index transfers, each keeping sum(y*alpha)
  // fixed and every coordinate walking monotonically to its target, then
  // refresh the error cache
  bool apply_face_move(const std::vector<size_t>& A, const std::vector<double>& delta,
                       double db) {
    size_t m = A.size();
    double total = 0.0;
    for (double d : delta) total += std::abs(d);
    if (!(total > 0.0) || !std::isfinite(total)) return false;
    std::vector<long double> resid(m);
    for (size_t r = 0; r < m; ++r) resid[r] = (long double)(y[A[r]] * delta[r]);
    std::vector<double> dalpha(m, 0.0);
    for (;;) {
      size_t p = m, q = m;
      for (size_t r = 0; r < m; ++r) {
        if (resid[r] > 1e-15L && (p == m || resid[r] > resid[p])) p = r;
        if (resid[r] < -1e-15L && (q == m || resid[r] < resid[q])) q = r;
      }
      if (p == m || q == m) break;
      long double mv = std::min(resid[p], -resid[q]);
      alpha[A[p]] += y[A[p]] * (double)mv;
      alpha[A[q]] -= y[A[q]] * (double)mv;
      dalpha[p] += y[A[p]] * (double)mv;
      dalpha[q] -= y[A[q]] * (double)mv;
      resid[p] -= mv;
      resid[q] += mv;
    }
    for (size_t r = 0; r < m; ++r) {
      double snap = 1e-12 * cbound[A[r]];
      if (alpha[A[r]] < snap) alpha[A[r]] = 0.0;
      if (alpha[A[r]] > cbound[A[r]] - snap) alpha[A[r]] = cbound[A[r]];
    }
    for (size_t t = 0; t < n; ++t) {
      double acc = db;
      for (size_t r = 0; r < m; ++r)
        if (dalpha[r] != 0.0) acc += y[A[r]] * dalpha[r] * K(A[r], t);
      err[t] += acc;
    }
    b += db;
    return true;
  }

  // The whole support pattern scaled by s stays feasible (class sums keep
  // their balance), and the dual along that ray is a parabola minimized at
  // s = sum(alpha) / alpha'H alpha, available for free from the cached
  // errors. While the classifier is wider than the data margin that s is
  // well above one, and one rescale does what thousands of pair steps
  // would express one mass transfer at a time.
  bool rescale_mass() {
    long double asum = 0.0L, aha = 0.0L;
    for (size_t t = 0; t < n; ++t) {
      if (!(alpha[t] > 0.0)) continue;
      asum += (long double)alpha[t];
      aha += (long double)alpha[t] * (long double)(y[t] * (err[t] - b + y[t]));
    }
    if (!(asum > 0.0L) || !(aha > 0.0L)) return false;
    double s = (double)(asum / aha);
    if (!std::isfinite(s)) return false;
    s = std::min(std::max(s, 0.125), 8.0);
    for (size_t t = 0; t < n; ++t)
      if (alpha[t] > 0.0 && s * alpha[t] > cbound[t]) s = cbound[t] / alpha[t];
    if (!(std::abs(s - 1.0) > 1e-9)) return false;
    std::vector<size_t> S;
    std::vector<double> delta;
    for (size_t t = 0; t < n; ++t)
      if (alpha[t] > 0.0) {
        S.push_back(t);
        delta.push_back((s - 1.0) * alpha[t]);
      }
    return apply_face_move(S, delta, 0.0);
  }

  // Admitting a KKT violator while pair updates refit the rest of the free
  // set one coordinate at a time is where the optimizer zigzags for
  // millions of iterations (the face Gram is singular whenever there are
  // more support vectors than feature dimensions, so pairs keep undoing
  // each other). Periodically rescale the mass, then do the face move at
  // once: solve the stationarity correction over a well-conditioned basis
  // of the free set plus the two extreme violators, and realize it as
  // two-index transfers.
  bool subspace_refine() {
    bool rescaled = rescale_mass();

    std::vector<size_t> A;
    for (size_t t = 0; t < n; ++t) {
      double athr = 1e-12 * cbound[t];
      if (alpha[t] > athr && alpha[t] < cbound[t] - athr) A.push_back(t);
    }
    size_t m = A.size();
    if (m > 400) return rescaled;

    // pivoted Cholesky of the face Gram, stopped at numerical rank: the
    // pivot set is a well-conditioned basis, the rest is linearly dependent
    std::vector<size_t> basis;
    if (m >= 1) {
      std::vector<long double> H(m * m), L(m * m, 0.0L), dres(m);
      long double maxdiag = 0.0L;
      for (size_t r = 0; r < m; ++r) {
        for (size_t c = 0; c < m; ++c)
          H[r * m + c] = (long double)(y[A[r]] * y[A[c]] * K(A[r], A[c]));
        dres[r] = H[r * m + r];
        maxdiag = std::max(maxdiag, dres[r]);
      }
      if (!(maxdiag > 0.0L)) return rescaled;
      std::vector<char> used(m, 0);
      long double cut = 1e-12L * maxdiag;
      while (basis.size() < m) {
        size_t p = m;
        for (size_t r = 0; r < m; ++r)
          if (!used[r] && (p == m || dres[r] > dres[p])) p = r;
        if (p == m || !(dres[p] > cut)) break;
        size_t k = basis.size();
        long double lkk = sqrtl(dres[p]);
        for (size_t r = 0; r < m; ++r) {
          if (used[r]) continue;
          long double acc = H[r * m + p];
          for (size_t j = 0; j < k; ++j) acc -= L[r * m + j] * L[p * m + j];
          L[r * m + k] = acc / lkk;
        }
        L[p * m + k] = lkk;
        for (size_t r = 0; r < m; ++r)
          if (!used[r] && r != p) dres[r] -= L[r * m + k] * L[r * m + k];
        used[p] = 1;
        basis.push_back(A[p]);
      }
    }

    // working set: the basis plus the maximal violating pair
    size_t iu = n, jl = n;
    double up = std::numeric_limits<double>::infinity();
    double low = -std::numeric_limits<double>::infinity();
    for (size_t t = 0; t < n; ++t) {
      if (in_up(t) && err[t] < up) {
        up = err[t];
        iu = t;
      }
      if (in_down(t) && err[t] > low) {
        low = err[t];
        jl = t;
      }
    }
    std::vector<size_t> W = basis;
    for (size_t v : {iu, jl})
      if (v < n && std::find(W.begin(), W.end(), v) == W.end()) W.push_back(v);
    size_t k = W.size();
    if (k < 2) return rescaled;

    // correction system in delta form: for each w in W drive err_w to zero,
    // last row keeps sum(y*alpha) unchanged
    size_t wd = k + 1;
    std::vector<long double> M(wd * wd, 0.0L), rhs(wd, 0.0L);
    for (size_t r = 0; r < k; ++r) {
      for (size_t c = 0; c < k; ++c) M[r * wd + c] = y[W[c]] * K(W[c], W[r]);
      M[r * wd + k] = 1.0L;
      rhs[r] = (long double)-err[W[r]];
    }
    for (size_t c = 0; c < k; ++c) M[k * wd + c] = (long double)y[W[c]];
    rhs[k] = 0.0L;

    // the working set can exceed the feature dimension, making M rank
    // deficient while the right-hand side stays (numerically) in its range;
    // a lightly damped normal-equations solve picks the min-norm solution
    // and keeps null-space components out of the step
    std::vector<long double> G(wd * wd, 0.0L), gr(wd, 0.0L);
    for (size_t r = 0; r < wd; ++r)
      for (size_t c = 0; c <= r; ++c) {
        long double acc = 0.0L;
        for (size_t t = 0; t < wd; ++t) acc += M[t * wd + r] * M[t * wd + c];
        G[r * wd + c] = G[c * wd + r] = acc;
      }
    long double gdiag = 0.0L;
    for (size_t r = 0; r < wd; ++r) gdiag = std::max(gdiag, G[r * wd + r]);
    if (!(gdiag > 0.0L)) return rescaled;
    long double mu = 1e-16L * gdiag;
    for (size_t r = 0; r < wd; ++r) G[r * wd + r] += mu;
    for (size_t r = 0; r < wd; ++r) {
      long double acc = 0.0L;
      for (size_t t = 0; t < wd; ++t) acc += M[t * wd + r] * rhs[t];
      gr[r] = acc;
    }
    for (size_t col = 0; col < wd; ++col) {
      long double p = G[col * wd + col];
      if (!(p > 0.0L)) return rescaled;
      for (size_t r = col + 1; r < wd; ++r) {
        long double f = G[r * wd + col] / p;
        if (f == 0.0L) continue;
        for (size_t c = col; c < wd; ++c) G[r * wd + c] -= f * G[col * wd + c];
        gr[r] -= f * gr[col];
      }
    }
    std::vector<long double> sol(wd);
    for (size_t ri = wd; ri-- > 0;) {
      long double acc = gr[ri];
      for (size_t c = ri + 1; c < wd; ++c) acc -= G[ri * wd + c] * sol[c];
      sol[ri] = acc / G[ri * wd + ri];
    }

    // the correction is worth applying only if it actually shrinks the
    // error pattern; when the errors are a null combination of the feature
    // vectors no alpha move can, and only rescaling or pair steps help
    long double rhs2 = 0.0L, res2 = 0.0L;
    for (size_t r = 0; r < wd; ++r) {
      long double acc = -rhs[r];
      for (size_t c = 0; c < wd; ++c) acc += M[r * wd + c] * sol[c];
      res2 += acc * acc;
      rhs2 += rhs[r] * rhs[r];
    }
    if (!(res2 < (1.0L - 1e-3L) * rhs2)) return rescaled;

    // clip to the box; the restriction is convex, so any prefix of the
    // direction still improves the dual
    double tstep = 1.0;
    for (size_t r = 0; r < k; ++r) {
      double cur = alpha[W[r]], d = (double)sol[r];
      if (!std::isfinite(d)) return rescaled;
      if (d < 0.0 && cur + d < 0.0) tstep = std::min(tstep, cur / -d);
      if (d > 0.0 && cur + d > cbound[W[r]])
        tstep = std::min(tstep, (cbound[W[r]] - cur) / d);
    }
    if (!(tstep > 1e-12)) return rescaled;
    std::vector<double> delta(k);
    for (size_t r = 0; r < k; ++r) delta[r] = tstep * (double)sol[r];
    return apply_face_move(W, delta, tstep * (double)sol[k]) || rescaled;
  }

  // recentred bias: midpoint of the active err interval, so unbound
  // support vectors end up with y*h as close to 1 as the gap allows
  double bias_shift() const {
    double up = std::numeric_limits<double>::infinity();
    double low = -std::numeric_limits<double>::infinity();
    for (size_t t = 0; t < n; ++t) {
      if (in_up(t)) up = std::min(up, err[t]);
      if (in_down(t)) low = std::max(low, err[t]);
    }
    if (!(up < std::numeric_limits<double>::infinity()) ||
        !(low > -std::numeric_limits<double>::infinity()))
      return 0.0;
    return -0.5 * (up + low);
  }
};

}  // namespace

double DualSolution::decision(const TrainingSet& ts, const KernelParams& k,
                              std::span<const double> x) const {
  double h = b;
  size_t np = ts.pos.size();
  for (size_t i : support) {
    double yi = i < np ? 1.0 : -1.0;
    const auto& xi = i < np ? ts.pos[i] : ts.neg[i - np];
    h += alphas[i] * yi * kernel(k, xi, x);
  }
  return h;
}

std::optional<DualSolution> train(const TrainingSet& ts, const KernelParams& k,
                                  const SvmConfig& cfg) {
  size_t np = ts.pos.size(), nn = ts.neg.size();
  size_t n = np + nn;
  std::vector<std::vector<double>> x;
  x.reserve(n);
  std::vector<double> y(n), cb(n);
  for (size_t i = 0; i < np; ++i) {
    x.push_back(ts.pos[i]);
    y[i] = 1.0;
    cb[i] = cfg.C * ts.weight_pos;
  }
  for (size_t i = 0; i < nn; ++i) {
    x.push_back(ts.neg[i]);
    y[np + i] = -1.0;
    cb[np + i] = cfg.C * ts.weight_neg;
  }

  Smo smo(x, y, cb, k, cfg.kkt_tol);
  size_t budget = cfg.max_passes ? cfg.max_passes : 500 * n;
  size_t refine_every = std::max<size_t>(25 * n, 64);
  for (size_t it = 0; it < budget; ++it) {
    if (it > 0 && it % refine_every == 0) smo.subspace_refine();
    if (!smo.iterate()) break;
  }

  DualSolution sol;
  sol.alphas = smo.alpha;
  sol.b = smo.b + smo.bias_shift();
  double amax = 0.0;
  for (double a : smo.alpha) amax = std::max(amax, a);
  for (size_t i = 0; i < n; ++i)
    if (smo.alpha[i] > 1e-9 * amax && smo.alpha[i] > 0.0) sol.support.push_back(i);

  // hard-margin sanity: any misclassified training point means inseparable
  for (size_t i = 0; i < n; ++i) {
    double h = sol.decision(ts, k, x[i]);
    if (!(y[i] * h > 0.0)) {
      if (const char* dump = std::getenv("NIL_SVM_DUMP")) {
        FILE* fp = std::fopen(dump, "w");
        if (fp) {
          std::fprintf(fp, "%zu %zu\n", np, nn);
          for (const auto& v : ts.pos) {
            for (double d : v) std::fprintf(fp, "%.17g ", d);
            std::fprintf(fp, "\n");
          }
          for (const auto& v : ts.neg) {
            for (double d : v) std::fprintf(fp, "%.17g ", d);
            std::fprintf(fp, "\n");
          }
          std::fclose(fp);
        }
      }
      return std::nullopt;
    }
  }
  sol.margin = functional_margin(sol, ts, k);
  return sol;
}

double functional_margin(const DualSolution& sol, const TrainingSet& ts,
                         const KernelParams& k) {
  size_t np = ts.pos.size(), nn = ts.neg.size();
  double wsq = 0.0;
  for (size_t i : sol.support)
    for (size_t j : sol.support) {
      double yi = i < np ? 1.0 : -1.0;
      double yj = j < np ? 1.0 : -1.0;
      const auto& xi = i < np ? ts.pos[i] : ts.neg[i - np];
      const auto& xj = j < np ? ts.pos[j] : ts.neg[j - np];
      wsq += sol.alphas[i] * sol.alphas[j] * yi * yj * kernel(k, xi, xj);
    }
  if (!(wsq > 0.0)) return 0.0;
  double hmin = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < np + nn; ++i) {
    const auto& xi = i < np ? ts.pos[i] : ts.neg[i - np];
    hmin = std::min(hmin, std::abs(sol.decision(ts, k, xi)));
  }
  return 2.0 * hmin / std::sqrt(wsq);
}

}  // namespace nil
