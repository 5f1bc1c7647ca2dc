// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#include "alfeld/assemble.hpp"

#include <mutex>

#include "alfeld/quadrature.hpp"

namespace alfeld {

namespace {

/// Cached Gram factors: G(r,s) = exact integral factor of
/// lambda^(a_r + b_s) over a unit-measure simplex.
const Eigen::MatrixXd& monomial_gram(int nvars, int dega, int degb) {
  static std::mutex mu;
  static std::map<std::array<int, 3>, Eigen::MatrixXd> cache;
  std::lock_guard<std::mutex> lock(mu);
  std::array<int, 3> key = {nvars, dega, degb};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const auto& ta = MonomialTable::get(nvars, dega);
  const auto& tb = MonomialTable::get(nvars, degb);
  Eigen::MatrixXd g(ta.size(), tb.size());
  MultiIndex sum(nvars, 0);
  for (int r = 0; r < ta.size(); ++r)
    for (int s = 0; s < tb.size(); ++s) {
      for (int v = 0; v < nvars; ++v)
        sum[v] = ta.exponents(r)[v] + tb.exponents(s)[v];
      g(r, s) = monomial_integral_factor<double>(nvars, sum);
    }
  return cache.emplace(key, std::move(g)).first->second;
}

double poly_pair_integral(const BaryPolyD& a, const BaryPolyD& b,
                          double volume) {
  if (a.is_zero() || b.is_zero()) return 0.0;
  const Eigen::MatrixXd& g = monomial_gram(a.nvars, a.degree, b.degree);
  double s = 0;
  for (int r = 0; r < int(a.coef.size()); ++r) {
    if (a.coef[r] == 0.0) continue;
    double row = 0;
    for (int c = 0; c < int(b.coef.size()); ++c)
      if (b.coef[c] != 0.0) row += g(r, c) * b.coef[c];
    s += a.coef[r] * row;
  }
  return s * volume;
}

/// Per-cell scratch: values, gradients and divergence of every local field
/// on every child.
struct FieldData {
  // grad[child][comp][dim], value[child][comp], div[child]
  std::vector<std::vector<BaryPolyD>> value;
  std::vector<std::vector<std::vector<BaryPolyD>>> grad;
  std::vector<BaryPolyD> div;
};

FieldData prepare_field(const PiecewiseFieldD& f, const LambdaSystemD& geom) {
  const int d = geom.d;
  FieldData fd;
  fd.value.resize(d + 1);
  fd.grad.resize(d + 1);
  fd.div.resize(d + 1);
  std::vector<PiecewiseFieldD> grads;
  for (int comp = 0; comp < f.n_comp(); ++comp)
    grads.push_back(gradient(f.comp[comp], geom));
  PiecewiseScalarD dv = divergence(f, geom);
  for (int c = 0; c <= d; ++c) {
    fd.value[c].resize(f.n_comp());
    fd.grad[c].resize(f.n_comp());
    for (int comp = 0; comp < f.n_comp(); ++comp) {
      fd.value[c][comp] = f.comp[comp].on_child[c];
      fd.grad[c][comp].resize(d);
      for (int i = 0; i < d; ++i)
        fd.grad[c][comp][i] = grads[comp].comp[i].on_child[c];
    }
    fd.div[c] = dv.on_child[c];
  }
  return fd;
}

}  // namespace

void assemble_velocity_gram(const FeSpace& space, SparseMatrix& a,
                            SparseMatrix& mu) {
  const MeshContext& ctx = *space.ctx;
  const int d = ctx.dim();
  std::vector<Eigen::Triplet<double>> ta, tmu;
  for (int m = 0; m < ctx.n_cells(); ++m) {
    const auto& geom = ctx.geom[m];
    const auto& fields = space.cell_basis[m];
    const int n = static_cast<int>(fields.size());
    std::vector<FieldData> data;
    data.reserve(n);
    for (const auto& lf : fields) data.push_back(prepare_field(lf.field, geom));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double stiff = 0, mass = 0;
        for (int c = 0; c <= d; ++c) {
          double vol = geom.child_volume[c];
          for (int comp = 0; comp < space.ncomp; ++comp) {
            mass += poly_pair_integral(data[i].value[c][comp],
                                       data[j].value[c][comp], vol);
            for (int dim = 0; dim < d; ++dim)
              stiff += poly_pair_integral(data[i].grad[c][comp][dim],
                                          data[j].grad[c][comp][dim], vol);
          }
        }
        int gi = fields[i].global_id, gj = fields[j].global_id;
        ta.emplace_back(gi, gj, stiff);
        tmu.emplace_back(gi, gj, stiff + mass);
        if (gi != gj) {
          ta.emplace_back(gj, gi, stiff);
          tmu.emplace_back(gj, gi, stiff + mass);
        }
      }
  }
  a.resize(space.dim, space.dim);
  a.setFromTriplets(ta.begin(), ta.end());
  mu.resize(space.dim, space.dim);
  mu.setFromTriplets(tmu.begin(), tmu.end());
}

AssembledOperators assemble(const FeSpace& velocity, const FeSpace& pressure) {
  ALFELD_REQUIRE(velocity.ctx == pressure.ctx, Err::MeshMismatch,
                 "velocity and pressure on different meshes");
  const MeshContext& ctx = *velocity.ctx;
  const int d = ctx.dim();

  AssembledOperators ops;
  assemble_velocity_gram(velocity, ops.A, ops.Mu);

  std::vector<Eigen::Triplet<double>> tb, tmp;
  for (int m = 0; m < ctx.n_cells(); ++m) {
    const auto& geom = ctx.geom[m];
    const auto& vfields = velocity.cell_basis[m];
    const auto& pfields = pressure.cell_basis[m];

    std::vector<PiecewiseScalarD> divs;
    divs.reserve(vfields.size());
    for (const auto& lf : vfields)
      divs.push_back(divergence(lf.field, geom));

    for (std::size_t q = 0; q < pfields.size(); ++q) {
      const auto& qp = pfields[q].field.comp[0];
      for (std::size_t v = 0; v < vfields.size(); ++v) {
        double val = 0;
        for (int c = 0; c <= d; ++c)
          val += poly_pair_integral(qp.on_child[c], divs[v].on_child[c],
                                    geom.child_volume[c]);
        if (val != 0.0)
          tb.emplace_back(pfields[q].global_id, vfields[v].global_id, val);
      }
      for (std::size_t r = q; r < pfields.size(); ++r) {
        double val = 0;
        for (int c = 0; c <= d; ++c)
          val += poly_pair_integral(qp.on_child[c],
                                    pfields[r].field.comp[0].on_child[c],
                                    geom.child_volume[c]);
        tmp.emplace_back(pfields[q].global_id, pfields[r].global_id, val);
        if (q != r)
          tmp.emplace_back(pfields[r].global_id, pfields[q].global_id, val);
      }
    }
  }
  ops.B.resize(pressure.dim, velocity.dim);
  ops.B.setFromTriplets(tb.begin(), tb.end());
  ops.Mp.resize(pressure.dim, pressure.dim);
  ops.Mp.setFromTriplets(tmp.begin(), tmp.end());
  return ops;
}

double divergence_image_check(const FeSpace& velocity,
                              const FeSpace& pressure) {
  const MeshContext& ctx = *velocity.ctx;
  const int d = ctx.dim();
  AssembledOperators ops = assemble(velocity, pressure);
  SpdSolver mp(ops.Mp);

  double worst = 0;
  for (int j = 0; j < velocity.dim; ++j) {
    DenseVector bj = ops.B.col(j);
    DenseVector c = mp.solve(bj);

    double res_sq = 0, div_sq = 0, h1_sq = 0;
    for (int m = 0; m < ctx.n_cells(); ++m) {
      const auto& geom = ctx.geom[m];
      // div v_j on this cell
      PiecewiseScalarD dv = pw_zero(geom, 0);
      bool has_v = false;
      for (const auto& lf : velocity.cell_basis[m])
        if (lf.global_id == j) {
          dv = divergence(lf.field, geom);
          h1_sq += l2_norm_sq(lf.field, geom) + h1_semi_sq(lf.field, geom);
          has_v = true;
        }
      // projection restricted to this cell
      PiecewiseScalarD proj = pw_zero(geom, 0);
      bool has_p = false;
      for (const auto& lf : pressure.cell_basis[m]) {
        double w = c[lf.global_id];
        if (w == 0.0) continue;
        proj = pw_add(proj, pw_scale(lf.field.comp[0], w));
        has_p = true;
      }
      if (!has_v && !has_p) continue;
      PiecewiseScalarD diff = pw_sub(dv, proj);
      res_sq += l2_norm_sq(diff, geom);
      div_sq += l2_norm_sq(dv, geom);
    }
    double denom =
        std::max(std::sqrt(std::max(div_sq, 0.0)),
                 1e-12 * std::sqrt(std::max(h1_sq, 0.0)));
    if (denom > 0)
      worst = std::max(worst, std::sqrt(std::max(res_sq, 0.0)) / denom);
  }
  return worst;
}

void verify_direct_sum(const FeSpace& space, int dense_cap) {
  if (space.dim == 0 || space.dim > dense_cap) return;
  SparseMatrix a, mu;
  assemble_velocity_gram(space, a, mu);
  Eigen::MatrixXd dense(mu);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  ALFELD_REQUIRE(lo > 1e-12 * hi, Err::SingularDofMatrix,
                 "direct-sum space is linearly dependent: " + space.name);
}

DenseVector assemble_load(
    const FeSpace& velocity,
    const std::function<Eigen::VectorXd(const Point&)>& f, int quad_degree) {
  const MeshContext& ctx = *velocity.ctx;
  const int d = ctx.dim();
  QuadratureRule rule = quadrature(d, std::min(quad_degree, kQuadratureDegreeCap));
  DenseVector load = DenseVector::Zero(velocity.dim);
  for (int m = 0; m < ctx.n_cells(); ++m) {
    const auto& geom = ctx.geom[m];
    for (int c = 0; c <= d; ++c) {
      double vol = geom.child_volume[c];
      for (int q = 0; q < rule.size(); ++q) {
        std::vector<double> xs = geom.child_point(c, rule.points[q]);
        Point x(d);
        for (int i = 0; i < d; ++i) x[i] = xs[i];
        Eigen::VectorXd fx = f(x);
        double w = vol * rule.weights[q];
        for (const auto& lf : velocity.cell_basis[m]) {
          double dot = 0;
          for (int comp = 0; comp < velocity.ncomp; ++comp) {
            const BaryPolyD& poly = lf.field.comp[comp].on_child[c];
            if (poly.is_zero()) continue;
            dot += fx[comp] * poly_eval(poly, rule.points[q]);
          }
          load[lf.global_id] += w * dot;
        }
      }
    }
  }
  return load;
}

PiecewiseFieldD combine_on_cell(const FeSpace& space, int cell,
                                const DenseVector& coef) {
  const auto& geom = space.ctx->geom[cell];
  PiecewiseFieldD acc;
  acc.comp.assign(space.ncomp, pw_zero(geom, 0));
  for (const auto& lf : space.cell_basis[cell]) {
    double w = coef[lf.global_id];
    if (w == 0.0) continue;
    acc = pw_add(acc, pw_scale(lf.field, w));
  }
  return acc;
}

double global_l2_norm(const FeSpace& space, const DenseVector& coef) {
  double s = 0;
  for (int m = 0; m < space.ctx->n_cells(); ++m)
    s += l2_norm_sq(combine_on_cell(space, m, coef), space.ctx->geom[m]);
  return std::sqrt(std::max(s, 0.0));
}

double global_h1_norm(const FeSpace& space, const DenseVector& coef) {
  double s = 0;
  for (int m = 0; m < space.ctx->n_cells(); ++m) {
    PiecewiseFieldD f = combine_on_cell(space, m, coef);
    s += l2_norm_sq(f, space.ctx->geom[m]) +
         h1_semi_sq(f, space.ctx->geom[m]);
  }
  return std::sqrt(std::max(s, 0.0));
}

double global_div_l2_norm(const FeSpace& space, const DenseVector& coef) {
  double s = 0;
  for (int m = 0; m < space.ctx->n_cells(); ++m) {
    PiecewiseFieldD f = combine_on_cell(space, m, coef);
    s += l2_norm_sq(divergence(f, space.ctx->geom[m]), space.ctx->geom[m]);
  }
  return std::sqrt(std::max(s, 0.0));
}

StokesPair build_pair(const MeshContext& ctx, PairKind kind, int k) {
  const int d = ctx.dim();
  StokesPair pair;
  switch (kind) {
    case PairKind::Cor52: {
      FeSpace p1 = lagrange_space(ctx, 1, false, true, d);
      FeSpace mf = bubble_space(ctx, true);
      pair.velocity = sum_spaces(p1, mf);
      pair.pressure = discontinuous_space(ctx, 0, false);
      pair.name = "cor5.2";
      pair.certified_divergence_free = true;
      break;
    }
    case PairKind::Cor64: {
      ALFELD_REQUIRE(k >= 1 && k < d, Err::DimensionRule,
                     "the low-order supplemented pair needs 1 <= k < d");
      FeSpace pk = lagrange_space(ctx, k, true, true, d);
      FeSpace mf = bubble_space(ctx, true);
      pair.velocity = sum_spaces(pk, mf);
      pair.pressure = discontinuous_space(ctx, k - 1, true);
      pair.name = "cor6.4-k" + std::to_string(k);
      pair.certified_divergence_free = true;
      break;
    }
    case PairKind::PkPk1Refined: {
      ALFELD_REQUIRE(k >= 1, Err::DimensionRule, "k >= 1 required");
      pair.velocity = lagrange_space(ctx, k, true, true, d);
      pair.pressure = discontinuous_space(ctx, k - 1, true);
      pair.name = "Pk-Pk-1r-k" + std::to_string(k);
      pair.certified_divergence_free = true;  // inclusion holds for any k
      break;
    }
    case PairKind::Cor68: {
      pair.velocity = cor68_space(ctx);
      pair.pressure = whr_space(ctx);
      pair.name = "cor6.8";
      pair.certified_divergence_free = true;
      break;
    }
    case PairKind::VhR: {
      pair.velocity = vr_space(ctx);
      pair.pressure = whr_space(ctx);
      pair.name = "vhr";
      pair.certified_divergence_free = true;
      break;
    }
    case PairKind::VmfP0: {
      pair.velocity = bubble_space(ctx, true);
      pair.pressure = discontinuous_space(ctx, 0, false);
      pair.name = "vmf-p0";
      pair.certified_divergence_free = true;
      break;
    }
    case PairKind::MacroPkP0: {
      ALFELD_REQUIRE(k >= 1, Err::DimensionRule, "k >= 1 required");
      pair.velocity = lagrange_space(ctx, k, false, true, d);
      pair.pressure = discontinuous_space(ctx, 0, false);
      pair.name = "macroPk-P0-k" + std::to_string(k);
      pair.certified_divergence_free = false;  // diagnostic pair
      break;
    }
  }
  if (pair.velocity.kind == SpaceKind::SumSpace)
    verify_direct_sum(pair.velocity);
  return pair;
}

PairKind pair_kind_from_string(const std::string& name) {
  if (name == "cor5.2") return PairKind::Cor52;
  if (name == "cor6.4") return PairKind::Cor64;
  if (name == "cor6.2" || name == "pk-pk-1r" || name == "Pk-Pk-1r")
    return PairKind::PkPk1Refined;
  if (name == "cor6.8") return PairKind::Cor68;
  if (name == "vhr") return PairKind::VhR;
  if (name == "vmf-p0") return PairKind::VmfP0;
  if (name == "macro-pk-p0") return PairKind::MacroPkP0;
  throw Error(Err::InvalidArgument, "unknown pair kind: " + name);
}

std::string pair_kind_name(PairKind kind) {
  switch (kind) {
    case PairKind::Cor52: return "cor5.2";
    case PairKind::Cor64: return "cor6.4";
    case PairKind::PkPk1Refined: return "pk-pk-1r";
    case PairKind::Cor68: return "cor6.8";
    case PairKind::VhR: return "vhr";
    case PairKind::VmfP0: return "vmf-p0";
    case PairKind::MacroPkP0: return "macro-pk-p0";
  }
  return "?";
}

}  // namespace alfeld
