#include "qutel/analytics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qutel {

namespace {

constexpr double kPi = std::numbers::pi;

struct ElementSums {
  double s0;   // population staying in |00>, |11>, |22>
  double s1;   // population leaked to |02>, |10>
  double s2;   // population leaked to |01>, |20>
  double coh;  // sum of the three coherences
};

ElementSums sums(const ResourceElements& e) {
  return {e.pop00 + e.pop11 + e.pop22, e.pop02 + e.pop10, e.pop01 + e.pop20,
          e.coh00_11 + e.coh00_22 + e.coh11_22};
}

void require_opt_domain(double mu, double d, double p) {
  detail::require_unit_interval(mu, "mu");
  detail::require_unit_interval(d, "d");
  detail::require_strength(p, "p");
}

}  // namespace

FidelityTerms fidelity_terms(const ResourceElements& e) {
  const ElementSums s = sums(e);
  const double total = s.s0 + s.s1 + s.s2;
  if (total < 1e-300 || s.s0 < 1e-300) {
    throw std::runtime_error("fidelity_terms: resource populations vanish");
  }
  return {s.s0 / total, (s.s1 + s.s2) / total, 2.0 * s.coh / total, 2.0 * s.coh / s.s0};
}

FidelityTerms fidelity_terms_wm(double mu, double d, double p, double q) {
  return fidelity_terms(wm_resource_elements({{d, d}, mu}, {p, p}, {q, q}));
}

FidelityTerms fidelity_terms_eam(double mu, double d, double q, Variant variant) {
  return fidelity_terms(eam_resource_elements({{d, d}, mu}, {q, q}, variant));
}

namespace {

double pointwise_fidelity(const InputAngles& angles, const FidelityTerms& t) {
  const Vector psi = input_state(angles);
  const double a = std::norm(psi(0));
  const double b = std::norm(psi(1));
  const double c = std::norm(psi(2));
  return t.A1 + (a * b + a * c + b * c) * (t.A2 + t.A3 - 2.0 * t.A1);
}

}  // namespace

double fidelity_wm(const InputAngles& angles, double mu, double d, double p, double q) {
  return pointwise_fidelity(angles, fidelity_terms_wm(mu, d, p, q));
}

double fidelity_eam(const InputAngles& angles, double mu, double d, double q, Variant variant) {
  return pointwise_fidelity(angles, fidelity_terms_eam(mu, d, q, variant));
}

double avg_fidelity_wm(double mu, double d, double p, double q) {
  const FidelityTerms t = fidelity_terms_wm(mu, d, p, q);
  return (1.0 + t.A1 + t.A3) / 4.0;
}

double avg_fidelity_eam(double mu, double d, double q, Variant variant) {
  const FidelityTerms t = fidelity_terms_eam(mu, d, q, variant);
  return (2.0 + t.B1) / 4.0;
}

double success_prob_wm(double mu, double d, double p, double q) {
  const ElementSums s = sums(wm_resource_elements({{d, d}, mu}, {p, p}, {q, q}));
  return s.s0 + s.s1 + s.s2;
}

double success_prob_eam(double mu, double d, double q, Variant variant) {
  const ElementSums s = sums(eam_resource_elements({{d, d}, mu}, {q, q}, variant));
  return s.s0;
}

namespace {

// Shared pieces of the optimal-strength closed forms.
struct OptPieces {
  double g;     // (1-mu) sqrt(1-d) + mu
  double b;     // (1-mu)(1-d) + mu
  double x;     // 2 ((1-mu) d + mu) d (1-p)^2
  double tail;  // residual reversal term; the Table variant drops one (1-p)
};

OptPieces opt_pieces(double mu, double d, double p, Variant variant) {
  const double mub = 1.0 - mu;
  const double db = 1.0 - d;
  const double pb = 1.0 - p;
  OptPieces o;
  o.g = mub * std::sqrt(db) + mu;
  o.b = mub * db + mu;
  o.x = 2.0 * (mub * d + mu) * d * pb * pb;
  const double pfactor = (variant == Variant::Operator) ? pb : 1.0;
  o.tail = 4.0 * mub * d * pfactor * (mub * db + mu * std::sqrt(db));
  return o;
}

}  // namespace

double avg_fidelity_wm_opt(double mu, double d, double p, Variant variant) {
  require_opt_domain(mu, d, p);
  const double pb = 1.0 - p;
  if (mu == 0.0 && d == 1.0) {
    // Removable singularity; directional limit along d -> 1.
    const double x = 2.0 * pb * pb;
    const double extra = (variant == Variant::Operator) ? 4.0 * pb : 4.0;
    return 0.25 + (x + 9.0) / (4.0 * (x + 3.0 + extra));
  }
  const OptPieces o = opt_pieces(mu, d, p, variant);
  const double g2 = o.g * o.g;
  return 0.25 + ((o.x + 5.0) * g2 + 4.0 * o.b) /
                    (4.0 * ((o.x + 1.0) * g2 + 2.0 * o.b + o.tail));
}

double success_prob_wm_opt(double mu, double d, double p, Variant variant) {
  require_opt_domain(mu, d, p);
  const OptPieces o = opt_pieces(mu, d, p, variant);
  const double pb = 1.0 - p;
  const double db = 1.0 - d;
  const double g2 = o.g * o.g;
  return pb * pb * pb * pb * db * db * g2 *
         ((o.x + 1.0) * g2 + 2.0 * o.b + o.tail) / 3.0;
}

double avg_fidelity_eam_opt(double mu, double d, Variant variant) {
  require_opt_domain(mu, d, 0.0);
  if (mu == 0.0 && d == 1.0) {
    return 1.0;  // removable singularity; limit along d -> 1 for both variants
  }
  const double mub = 1.0 - mu;
  const double db = 1.0 - d;
  const double g = mub * std::sqrt(db) + mu;
  if (variant == Variant::Operator) {
    return 0.5 + (2.0 * g * g + mu + mub * db) / (2.0 * (g * g + 2.0 * mu + 2.0 * mub * db));
  }
  const double num =
      2.0 * (mub * std::sqrt(db) * (1.0 + 2.0 * db) + mu * (1.0 + 2.0 * db * db)) * g +
      mub * db + mu + 2.0 * db * db;
  const double den = 2.0 * ((2.0 * (mu * db + mub) * db + 1.0) * g * g +
                            2.0 * (mub * db + mu) + 4.0 * db * db);
  return 0.5 + num / den;
}

double success_prob_eam_opt(double mu, double d, Variant variant) {
  require_opt_domain(mu, d, 0.0);
  const double mub = 1.0 - mu;
  const double db = 1.0 - d;
  const double g = mub * std::sqrt(db) + mu;
  if (variant == Variant::Operator) {
    return db * db * g * g * (g * g + 2.0 * mu + 2.0 * mub * db) / 3.0;
  }
  return db * db * g * g *
         ((2.0 * (mu * db + mub) * db + 1.0) * g * g + 2.0 * (mub * db + mu) +
          4.0 * db * db) / 9.0;
}

double cad_baseline(double mu, double d) {
  return avg_fidelity_wm(mu, d, 0.0, 0.0);
}

double balanced_improvement(double mu, double d, double p) {
  return avg_fidelity_eam_opt(mu, d) * success_prob_eam_opt(mu, d) -
         avg_fidelity_wm_opt(mu, d, p) * success_prob_wm_opt(mu, d, p);
}

double numeric_optimal_q(Scheme scheme, double mu, double d, double p) {
  if (scheme == Scheme::None) {
    throw std::invalid_argument("numeric_optimal_q: no reversal in the bare scheme");
  }
  require_opt_domain(mu, d, p);
  const auto value = [&](double q) {
    return (scheme == Scheme::WM) ? avg_fidelity_wm(mu, d, p, q) : avg_fidelity_eam(mu, d, q);
  };

  // Coarse scan to bracket the maximum; strict improvement keeps the
  // smallest q on plateaus.
  constexpr int kScan = 1000;
  const double hi = 1.0 - 1e-6;
  int best = 0;
  double best_value = value(0.0);
  for (int i = 1; i <= kScan; ++i) {
    const double v = value(hi * i / kScan);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  double lo = hi * std::max(0, best - 1) / kScan;
  double up = hi * std::min(kScan, best + 1) / kScan;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = up - invphi * (up - lo);
  double e = lo + invphi * (up - lo);
  double fc = value(c);
  double fe = value(e);
  while (up - lo > 1e-8) {
    if (fc > fe) {
      up = e;
      e = c;
      fe = fc;
      c = up - invphi * (up - lo);
      fc = value(c);
    } else {
      lo = c;
      c = e;
      fc = fe;
      e = lo + invphi * (up - lo);
      fe = value(e);
    }
  }
  const double refined = (lo + up) / 2.0;
  return (value(0.0) >= value(refined)) ? 0.0 : refined;
}

GaussLegendre gauss_legendre(int n) {
  if (n < 1) {
    throw std::invalid_argument("gauss_legendre: need at least one node");
  }
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      derivative = n * (x * p0 - p1) / (x * x - 1.0);
      const double step = p0 / derivative;
      x -= step;
      if (std::abs(step) < 1e-15) {
        break;
      }
    }
    gl.nodes[i] = x;
    gl.weights[i] = 2.0 / ((1.0 - x * x) * derivative * derivative);
  }
  return gl;
}

double average_fidelity_quadrature(const std::function<double(const InputAngles&)>& pointwise,
                                   int nodes_per_axis) {
  const GaussLegendre gl = gauss_legendre(nodes_per_axis);
  const double half = kPi / 4.0;
  double sum = 0.0;
  for (int i = 0; i < nodes_per_axis; ++i) {
    const double t1 = half * (gl.nodes[i] + 1.0);
    const double s1 = std::sin(t1);
    const double density1 = s1 * s1 * s1 * std::cos(t1);
    for (int j = 0; j < nodes_per_axis; ++j) {
      const double t2 = half * (gl.nodes[j] + 1.0);
      const double density2 = std::sin(t2) * std::cos(t2);
      // Normalized input-family measure: 8 sin^3(t1) cos(t1) sin(t2) cos(t2).
      sum += gl.weights[i] * gl.weights[j] * half * half * 8.0 * density1 * density2 *
             pointwise({t1, t2, 0.0, 0.0});
    }
  }
  return sum;
}

MeritPoint merit_point(double mu, double d, double p, Scheme scheme,
                       std::optional<double> q_explicit, Variant variant) {
  require_opt_domain(mu, d, p);
  MeritPoint pt;
  pt.mu = mu;
  pt.d = d;
  pt.p = p;
  pt.scheme = scheme;
  pt.F_cad = cad_baseline(mu, d);
  pt.F_imp = balanced_improvement(mu, d, p);

  // Strengths live in [0, 1); the d = 1 optimum sits on the boundary, so the
  // element-table evaluations are taken just inside it.
  const auto clamp_strength = [](double q) { return std::min(q, 1.0 - 1e-9); };

  double q_eam_used;
  if (q_explicit) {
    const double q = *q_explicit;
    detail::require_strength(q, "q");
    pt.F_wm = avg_fidelity_wm(mu, d, p, q);
    pt.P_wm = success_prob_wm(mu, d, p, q);
    pt.F_eam = avg_fidelity_eam(mu, d, q, variant);
    pt.P_eam = success_prob_eam(mu, d, q, variant);
    pt.q = (scheme == Scheme::None) ? 0.0 : q;
    q_eam_used = q;
  } else {
    pt.F_wm = avg_fidelity_wm_opt(mu, d, p, variant);
    pt.P_wm = success_prob_wm_opt(mu, d, p, variant);
    pt.F_eam = avg_fidelity_eam_opt(mu, d, variant);
    pt.P_eam = success_prob_eam_opt(mu, d, variant);
    const double q_wm = optimal_q_wm(p, d, mu);
    const double q_eam = optimal_q_eam(d, mu);
    pt.q = (scheme == Scheme::WM) ? q_wm : (scheme == Scheme::EAM ? q_eam : 0.0);
    q_eam_used = clamp_strength(q_eam);
  }
  const double qg = clamp_strength(q_eam_used);
  pt.eq21_discrepancy = eam_variant_gap({{d, d}, mu}, {qg, qg});
  return pt;
}

double selected_fidelity(const MeritPoint& point) {
  switch (point.scheme) {
    case Scheme::WM:
      return point.F_wm;
    case Scheme::EAM:
      return point.F_eam;
    case Scheme::None:
      break;
  }
  return point.F_cad;
}

double selected_probability(const MeritPoint& point) {
  switch (point.scheme) {
    case Scheme::WM:
      return point.P_wm;
    case Scheme::EAM:
      return point.P_eam;
    case Scheme::None:
      break;
  }
  return 1.0;
}

}  // namespace qutel
