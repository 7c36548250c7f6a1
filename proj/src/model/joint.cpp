#include "climact/joint.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "climact/nodes.hpp"

namespace climact {

namespace {

// Users per reduction chunk. Chunk boundaries and the chunk reduction
// order are fixed, which keeps sums bit-identical across thread counts.
constexpr std::size_t kChunk = 256;

// log pmf of Bernoulli(y | sigmoid(a)) plus the success probability,
// from a single exp.
inline double bern_term(bool y, double a, double& prob) {
  const double t = std::exp(-std::abs(a));
  const double l = std::log1p(t);
  if (a >= 0.0) {
    prob = 1.0 / (1.0 + t);
    return y ? -l : -a - l;
  }
  prob = t / (1.0 + t);
  return y ? a - l : -l;
}

struct UserGrad {
  Vec4 d{};
  double s = 0.0;
};

}  // namespace

JointModel::JointModel(const SubredditCatalog& catalog,
                       std::span<const UserObservation> users,
                       const Hyperparameters& hyper,
                       const ModelStructure& structure)
    : catalog_(&catalog),
      users_(users),
      hyper_(hyper),
      structure_(structure),
      layout_(structure, hyper) {
  hyper_.validate();
}

JointModel::JointModel(const Dataset& data, const Hyperparameters& hyper,
                       const ModelStructure& structure)
    : JointModel(data.catalog, data.users, hyper, structure) {}

std::size_t JointModel::dim() const {
  return layout_.size() + users_.size() * latents_per_user();
}

void JointModel::latents_from(std::span<const double> z, std::size_t user,
                              Vec4& d, double& s) const {
  const std::size_t off = latent_offset(user);
  d = Vec4{};
  if (structure_.demographics) {
    for (std::size_t a = 0; a < 4; ++a) d[a] = z[off + a];
    s = z[off + 4];
  } else {
    s = z[off];
  }
}

double JointModel::log_density(std::span<const double> z) const {
  return eval(z, {}, {}, 1.0);
}

double JointModel::log_density_grad(std::span<const double> z,
                                    std::span<double> grad) const {
  return eval(z, grad, {}, 1.0);
}

double JointModel::eval(std::span<const double> z, std::span<double> grad,
                        std::span<const std::uint32_t> subset,
                        double scale) const {
  if (z.size() != dim())
    throw std::invalid_argument("JointModel: coordinate vector has size " +
                                std::to_string(z.size()) + ", expected " +
                                std::to_string(dim()));
  const bool with_grad = !grad.empty();
  if (with_grad && grad.size() != dim())
    throw std::invalid_argument("JointModel: gradient vector size mismatch");

  const ModelParameters params = layout_.unpack(z);
  const ParamLayout& L = layout_;
  const std::size_t n_param = L.size();
  const std::size_t k_subs = catalog_->size();
  const double var_s = hyper_.var_s;
  const double log_theta = L.log_theta_e >= 0 ? z[L.log_theta_e] : 0.0;

  // Shared per-subreddit weight of the sympathy term in the short-term
  // participation logit.
  std::vector<double> sym_weight(k_subs);
  for (std::size_t k = 0; k < k_subs; ++k)
    sym_weight[k] = dot4(params.beta_ps1, catalog_->scores[k]);

  if (with_grad) std::fill(grad.begin(), grad.end(), 0.0);

  std::vector<std::uint32_t> all;
  if (subset.empty()) {
    all.resize(users_.size());
    std::iota(all.begin(), all.end(), 0u);
    subset = all;
  }

  const std::size_t n_active = subset.size();
  const std::size_t n_chunks = (n_active + kChunk - 1) / kChunk;
  std::vector<double> chunk_val(n_chunks, 0.0);
  std::vector<double> chunk_pg;
  if (with_grad) chunk_pg.assign(n_chunks * n_param, 0.0);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_chunks); ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t end = std::min(begin + kChunk, n_active);
    double* pg = with_grad ? chunk_pg.data() + c * n_param : nullptr;
    auto acc = [&](int idx, double v) {
      if (idx >= 0) pg[idx] += v;
    };
    double val = 0.0;

    for (std::size_t pos = begin; pos < end; ++pos) {
      const std::size_t u = subset[pos];
      const UserObservation& ob = users_[u];
      const std::size_t off = latent_offset(u);
      Vec4 d{};
      double s;
      if (structure_.demographics) {
        for (std::size_t a = 0; a < 4; ++a) d[a] = z[off + a];
        s = z[off + 4];
      } else {
        s = z[off];
      }
      UserGrad g;

      // Latent sociodemographics prior: standard normal per axis.
      if (structure_.demographics) {
        for (std::size_t a = 0; a < 4; ++a) {
          val += -0.5 * (kLog2Pi + d[a] * d[a]);
          g.d[a] -= d[a];
        }
      }

      // Short-term engagement given long-term engagement.
      if (structure_.engagement) {
        const double mu = params.beta_e1 * ob.e_long + params.beta_e0;
        const double r = ob.e_short - mu;
        const double q = r * r / params.theta_e;
        val += -0.5 * (kLog2Pi + log_theta + q);
        if (with_grad) {
          const double rv = r / params.theta_e;
          acc(L.beta_e0, rv);
          acc(L.beta_e1, rv * ob.e_long);
          acc(L.log_theta_e, 0.5 * (q - 1.0));
        }
      }

      // Long-term participation, one Bernoulli per subreddit.
      {
        const double base = params.beta_pl3 * ob.e_long + params.beta_pl0;
        for (std::size_t k = 0; k < k_subs; ++k) {
          const Vec4& sc = catalog_->scores[k];
          const double sd = structure_.demographics ? dot4(sc, d) : 0.0;
          const double a = params.beta_pl1 * sd +
                           params.beta_pl2 * catalog_->popularity[k] + base;
          double p;
          val += bern_term(ob.p_long[k] != 0, a, p);
          if (with_grad) {
            const double w = (ob.p_long[k] != 0 ? 1.0 : 0.0) - p;
            acc(L.beta_pl0, w);
            acc(L.beta_pl1, w * sd);
            acc(L.beta_pl2, w * catalog_->popularity[k]);
            acc(L.beta_pl3, w * ob.e_long);
            if (structure_.demographics)
              for (std::size_t ax = 0; ax < 4; ++ax)
                g.d[ax] += w * params.beta_pl1 * sc[ax];
          }
        }
      }

      // Sympathy prior around its structural mean.
      {
        const double mu = dot4(params.beta_s1, d) + params.beta_s2 * ob.e_long +
                          dot3(params.beta_s3, ob.m_long);
        const double r = s - mu;
        val += -0.5 * (kLog2Pi + std::log(var_s)) - r * r / (2.0 * var_s);
        if (with_grad) {
          const double rs = r / var_s;
          if (L.beta_s1 >= 0)
            for (std::size_t ax = 0; ax < 4; ++ax) pg[L.beta_s1 + ax] += rs * d[ax];
          acc(L.beta_s2, rs * ob.e_long);
          if (L.beta_s3 >= 0)
            for (std::size_t t = 0; t < 3; ++t) pg[L.beta_s3 + t] += rs * ob.m_long[t];
          if (structure_.demographics)
            for (std::size_t ax = 0; ax < 4; ++ax) g.d[ax] += rs * params.beta_s1[ax];
          g.s -= rs;
        }
      }

      // Short-term participation; also accumulates the score-row sum of
      // participated subreddits for the interaction node.
      Vec4 score_sum{};
      {
        const double base = params.beta_ps4 * ob.e_short + params.beta_ps0;
        for (std::size_t k = 0; k < k_subs; ++k) {
          const bool pl = ob.p_long[k] != 0;
          const bool ps = ob.p_short[k] != 0;
          const double b = s * sym_weight[k] + params.beta_ps2 * (pl ? 1.0 : 0.0) +
                           params.beta_ps3 * catalog_->popularity[k] + base;
          double p;
          val += bern_term(ps, b, p);
          if (ps && structure_.interaction) {
            const Vec4& sc = catalog_->scores[k];
            for (std::size_t ax = 0; ax < 4; ++ax) score_sum[ax] += sc[ax];
          }
          if (with_grad) {
            const double v = (ps ? 1.0 : 0.0) - p;
            acc(L.beta_ps0, v);
            if (L.beta_ps1 >= 0) {
              const Vec4& sc = catalog_->scores[k];
              for (std::size_t ax = 0; ax < 4; ++ax)
                pg[L.beta_ps1 + ax] += v * s * sc[ax];
            }
            acc(L.beta_ps2, v * (pl ? 1.0 : 0.0));
            acc(L.beta_ps3, v * catalog_->popularity[k]);
            acc(L.beta_ps4, v * ob.e_short);
            g.s += v * sym_weight[k];
          }
        }
      }

      // Interaction with an activist.
      if (structure_.interaction) {
        const double a = dot4(params.beta_i1, score_sum) +
                         params.beta_i2 * ob.e_short + params.beta_i0;
        double p;
        val += bern_term(ob.interacted != 0, a, p);
        if (with_grad) {
          const double w = (ob.interacted != 0 ? 1.0 : 0.0) - p;
          acc(L.beta_i0, w);
          for (std::size_t ax = 0; ax < 4; ++ax)
            pg[L.beta_i1 + ax] += w * score_sum[ax];
          acc(L.beta_i2, w * ob.e_short);
        }
      }

      // Activation.
      {
        const double a =
            params.beta_a1 * s + params.beta_a2 * (ob.interacted != 0 ? 1.0 : 0.0) +
            dot3(params.beta_a3, ob.m_short) + dot3(params.beta_a4, ob.m_long) +
            params.beta_a5 * ob.e_short + params.beta_a0;
        double p;
        val += bern_term(ob.activated != 0, a, p);
        if (with_grad) {
          const double w = (ob.activated != 0 ? 1.0 : 0.0) - p;
          acc(L.beta_a0, w);
          acc(L.beta_a1, w * s);
          acc(L.beta_a2, w * (ob.interacted != 0 ? 1.0 : 0.0));
          if (L.beta_a3 >= 0)
            for (std::size_t t = 0; t < 3; ++t) pg[L.beta_a3 + t] += w * ob.m_short[t];
          if (L.beta_a4 >= 0)
            for (std::size_t t = 0; t < 3; ++t) pg[L.beta_a4 + t] += w * ob.m_long[t];
          acc(L.beta_a5, w * ob.e_short);
          g.s += w * params.beta_a1;
        }
      }

      if (with_grad) {
        if (structure_.demographics) {
          for (std::size_t a = 0; a < 4; ++a) grad[off + a] = scale * g.d[a];
          grad[off + 4] = scale * g.s;
        } else {
          grad[off] = scale * g.s;
        }
      }
    }
    chunk_val[c] = val;
  }

  double total = 0.0;
  for (std::size_t c = 0; c < n_chunks; ++c) total += chunk_val[c];
  total *= scale;
  total += L.log_prior(z.first(n_param));
  if (with_grad) {
    for (std::size_t c = 0; c < n_chunks; ++c) {
      const double* pg = chunk_pg.data() + c * n_param;
      for (std::size_t i = 0; i < n_param; ++i) grad[i] += scale * pg[i];
    }
    L.add_log_prior_grad(z.first(n_param), grad.first(n_param));
  }
  return total;
}

double joint_log_density(const ModelParameters& params,
                         const LatentState& latents,
                         std::span<const UserObservation> users,
                         const SubredditCatalog& catalog,
                         const Hyperparameters& hyper,
                         const ModelStructure& structure) {
  catalog.validate();
  if (!params.all_finite())
    throw std::invalid_argument("joint_log_density: non-finite parameters");
  if (structure.engagement && !(params.theta_e > 0.0))
    throw std::invalid_argument("joint_log_density: theta_e must be > 0");
  if (latents.s.size() != users.size() ||
      (structure.demographics && latents.d.size() != users.size()))
    throw std::invalid_argument(
        "joint_log_density: latent count != user count");
  const std::size_t k = catalog.size();
  for (const UserObservation& u : users)
    if (u.p_long.size() != k || u.p_short.size() != k)
      throw std::invalid_argument("joint_log_density: user '" + u.id +
                                  "' participation length != catalog K");

  JointModel model(catalog, users, hyper, structure);
  std::vector<double> z(model.dim());
  model.layout().pack(params, z);
  for (std::size_t u = 0; u < users.size(); ++u) {
    const std::size_t off = model.latent_offset(u);
    if (structure.demographics) {
      for (std::size_t a = 0; a < 4; ++a) z[off + a] = latents.d[u][a];
      z[off + 4] = latents.s[u];
    } else {
      z[off] = latents.s[u];
    }
  }
  return model.log_density(z);
}

}  // namespace climact
