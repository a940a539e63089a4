#include "partrec/discrete.hpp"

#include "partrec/error.hpp"
#include "partrec/numeric.hpp"
#include "partrec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace partrec {

namespace {

template <typename T>
T ipow(const T& base, std::int64_t k) {
  T out = 1;
  for (std::int64_t i = 0; i < k; ++i) out *= base;
  return out;
}

double ipow_d(double base, std::int64_t k) { return std::pow(base, static_cast<double>(k)); }

std::size_t grid_atoms(const Density& density, int m) {
  if (!density.bounded()) throw Error(ErrorCode::UnboundedSupport, density.name() + " has unbounded support");
  if (m < 1) throw Error(ErrorCode::BadParams, "grid resolution m must be >= 1");
  const double mm = density.upper() * m;
  const double rounded = std::round(mm);
  if (std::abs(mm - rounded) > 1e-9) {
    throw Error(ErrorCode::NonIntegerGrid, "M*m = " + std::to_string(mm) + " is not an integer");
  }
  return static_cast<std::size_t>(rounded) + 1;
}

void check_positions(const ValidatedPlan& plan, std::span<const std::size_t> positions) {
  if (positions.empty()) throw Error(ErrorCode::EmptySelection, "no positions selected");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] < 1 || positions[i] > plan.size()) {
      throw Error(ErrorCode::IndexOutOfRange, "position " + std::to_string(positions[i]) + " outside 1.." +
                                                  std::to_string(plan.size()));
    }
    if (i > 0 && positions[i] <= positions[i - 1]) {
      throw Error(ErrorCode::InvalidQuery, "positions must be strictly increasing");
    }
  }
}

/// Running sums in T; doubles get compensation.
template <typename T>
struct Accumulator {
  T sum = 0;
  void add(const T& v) { sum += v; }
  T value() const { return sum; }
};

template <>
struct Accumulator<double> {
  CompensatedSum sum;
  void add(double v) { sum.add(v); }
  double value() const { return sum.value(); }
};

template <typename T>
T power_of(const T& base, std::int64_t k) {
  if constexpr (std::is_same_v<T, double>) {
    return ipow_d(base, k);
  } else {
    return ipow(base, k);
  }
}

template <typename T>
std::vector<T> profile_impl(const ValidatedPlan& plan, std::span<const std::size_t> positions,
                            const std::vector<T>& masses, const std::vector<T>& cum) {
  const std::size_t atoms = masses.size();
  std::vector<T> level(atoms + 1, T(0));
  std::int64_t prev_c = 0;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const std::int64_t c = plan.cardinality(positions[k]);
    const std::int64_t power = (k == 0) ? c - 1 : c - prev_c - 1;
    std::vector<T> next(atoms + 1, T(0));
    Accumulator<T> acc;
    for (std::size_t l1 = 0; l1 < atoms; ++l1) {
      T term = power_of(cum[l1], power) * masses[l1];
      if (k > 0) term *= level[l1];
      acc.add(term);
      next[l1 + 1] = acc.value();
    }
    level = std::move(next);
    prev_c = c;
  }
  return level;
}

template <typename T>
T abs_of(const T& v) {
  return v < 0 ? T(-v) : v;
}

template <typename T>
void lemma_impl(LemmaReport& report, int m, int r, const std::vector<T>& f, const std::vector<T>& F,
                const std::vector<T>& g, const std::vector<T>& G) {
  const std::size_t atoms = f.size();
  const T inv_m = T(1) / T(m);
  const T inv_r = T(1) / T(r);

  T theta_dev = 0, cdf_dev = 0, weighted_dev = 0;
  Accumulator<T> theta_acc, weighted_acc, norm_acc;
  for (std::size_t l = 0; l < atoms; ++l) {
    // Sums run over l1 < l, so compare before adding term l.
    const T target = power_of(F[l], r) * inv_r;
    theta_dev = std::max(theta_dev, abs_of(T(theta_acc.value() * inv_m - target)));
    weighted_dev = std::max(weighted_dev, abs_of(T(weighted_acc.value() - target)));
    cdf_dev = std::max(cdf_dev, abs_of(T(power_of(G[l], r) - power_of(F[l], r))));

    const T lead = power_of(F[l], r - 1);
    theta_acc.add(lead * f[l]);
    weighted_acc.add(lead * g[l]);
    norm_acc.add(f[l]);
  }
  const T norm_dev = abs_of(T(norm_acc.value() * inv_m - T(1)));

  auto push = [&](const char* name, const T& dev) {
    LemmaRow row;
    row.relation = name;
    if constexpr (std::is_same_v<T, double>) {
      row.deviation = dev;
    } else {
      row.exact_deviation = dev;
      row.deviation = to_double(dev);
    }
    row.scaled = row.deviation * m;
    report.rows.push_back(std::move(row));
  };
  push("theta", theta_dev);
  push("normalization", norm_dev);
  push("cdf_power", cdf_dev);
  push("weighted_sum", weighted_dev);
}

}  // namespace

DiscreteModel discretize(const Density& density, int m, Arithmetic arithmetic) {
  const std::size_t atoms = grid_atoms(density, m);
  DiscreteModel model;
  model.m = m;
  model.upper = density.upper();

  if (arithmetic == Arithmetic::Auto && density.has_exact()) {
    std::vector<Rational> f(atoms);
    Rational total = 0;
    for (std::size_t l = 0; l < atoms; ++l) {
      f[l] = density.pdf_exact(Rational(static_cast<long long>(l), m));
      total += f[l];
    }
    if (total <= 0) throw Error(ErrorCode::ZeroMass, "f vanishes on every grid point");
    std::vector<Rational> cum(atoms + 1, Rational(0));
    for (std::size_t l = 0; l < atoms; ++l) {
      f[l] /= total;
      cum[l + 1] = cum[l] + f[l];
    }
    for (std::size_t l = 0; l < atoms; ++l) model.masses.push_back(to_double(f[l]));
    for (std::size_t l = 0; l <= atoms; ++l) model.cum.push_back(to_double(cum[l]));
    model.exact_masses = std::move(f);
    model.exact_cum = std::move(cum);
    return model;
  }

  std::vector<double> f(atoms);
  CompensatedSum total;
  for (std::size_t l = 0; l < atoms; ++l) {
    f[l] = density.pdf(static_cast<double>(l) / m);
    total.add(f[l]);
  }
  if (!(total.value() > 0.0)) throw Error(ErrorCode::ZeroMass, "f vanishes on every grid point");
  model.masses.resize(atoms);
  for (std::size_t l = 0; l < atoms; ++l) model.masses[l] = f[l] / total.value();
  model.cum.assign(atoms + 1, 0.0);
  CompensatedSum running;
  for (std::size_t l = 0; l < atoms; ++l) {
    running.add(model.masses[l]);
    model.cum[l + 1] = running.value();
  }
  model.cum.back() = 1.0;
  return model;
}

double theta(const Density& density, int m, std::int64_t l, int r) {
  const std::size_t atoms = grid_atoms(density, m);
  if (l < 0 || static_cast<std::size_t>(l) >= atoms) {
    throw Error(ErrorCode::IndexOutOfRange, "l = " + std::to_string(l) + " outside 0.." + std::to_string(atoms - 1));
  }
  if (r < 1) throw Error(ErrorCode::BadParams, "r must be >= 1");
  CompensatedSum acc;
  for (std::int64_t l1 = 0; l1 < l; ++l1) {
    const double x = static_cast<double>(l1) / m;
    acc.add(ipow_d(density.cdf(x), r - 1) * density.pdf(x));
  }
  return acc.value() / m;
}

const LemmaRow& LemmaReport::row(const std::string& relation) const {
  for (const auto& r : rows) {
    if (r.relation == relation) return r;
  }
  throw Error(ErrorCode::BadParams, "no lemma relation named " + relation);
}

LemmaReport lemma_checks(const Density& density, int m, int r, Arithmetic arithmetic) {
  if (r < 1) throw Error(ErrorCode::BadParams, "r must be >= 1");
  const DiscreteModel model = discretize(density, m, arithmetic);
  const std::size_t atoms = model.atoms();
  LemmaReport report;
  report.m = m;
  report.r = r;
  if (model.exact()) {
    std::vector<Rational> f(atoms), F(atoms);
    for (std::size_t l = 0; l < atoms; ++l) {
      const Rational x(static_cast<long long>(l), m);
      f[l] = density.pdf_exact(x);
      F[l] = density.cdf_exact(x);
    }
    lemma_impl<Rational>(report, m, r, f, F, *model.exact_masses, *model.exact_cum);
  } else {
    std::vector<double> f(atoms), F(atoms);
    for (std::size_t l = 0; l < atoms; ++l) {
      const double x = static_cast<double>(l) / m;
      f[l] = density.pdf(x);
      F[l] = density.cdf(x);
    }
    lemma_impl<double>(report, m, r, f, F, model.masses, model.cum);
  }
  return report;
}

DiscreteProbability joint_record_prob_discrete(const ValidatedPlan& plan, std::span<const std::size_t> positions,
                                               const DiscreteModel& model, Arithmetic arithmetic) {
  check_positions(plan, positions);
  DiscreteProbability out;
  if (arithmetic == Arithmetic::Auto && model.exact()) {
    auto level = profile_impl<Rational>(plan, positions, *model.exact_masses, *model.exact_cum);
    out.exact = level.back();
    out.value = to_double(level.back());
  } else {
    out.value = profile_impl<double>(plan, positions, model.masses, model.cum).back();
  }
  return out;
}

std::vector<double> bounded_profile(const ValidatedPlan& plan, std::span<const std::size_t> positions,
                                    const DiscreteModel& model) {
  check_positions(plan, positions);
  return profile_impl<double>(plan, positions, model.masses, model.cum);
}

double asymptotic_bounded_deviation(const ValidatedPlan& plan, std::span<const std::size_t> positions,
                                    const DiscreteModel& model, const Density& density, CdfExponent exponent) {
  const auto profile = bounded_profile(plan, positions, model);
  double denom = 1.0;
  for (auto t : positions) denom *= static_cast<double>(plan.cardinality(t));
  const std::size_t last = positions.back();
  const auto e = exponent == CdfExponent::Cardinality ? plan.cardinality(last) : plan.index(last);
  double worst = 0.0;
  for (std::size_t l = 0; l < model.atoms(); ++l) {
    const double target = ipow_d(density.cdf(static_cast<double>(l) / model.m), e) / denom;
    worst = std::max(worst, std::abs(profile[l] - target));
  }
  return worst;
}

std::vector<SweepRow> error_sweep(const ValidatedPlan& plan, std::span<const std::size_t> positions,
                                  const Density& density, std::span<const int> m_list, unsigned threads) {
  check_positions(plan, positions);
  const double p_inf = to_double(joint_record_prob(plan, positions));
  std::vector<SweepRow> rows(m_list.size());
  auto one = [&](std::size_t i) {
    const int m = m_list[i];
    const DiscreteModel model = discretize(density, m, Arithmetic::Float);
    const double p = joint_record_prob_discrete(plan, positions, model, Arithmetic::Float).value;
    const double err = std::abs(p - p_inf);
    rows[i] = {m, p, p_inf, err, err * m};
  };
  // Validate every m up front so errors surface deterministically.
  for (int m : m_list) grid_atoms(density, m);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, m_list.size()))));
  if (threads == 1) {
    for (std::size_t i = 0; i < m_list.size(); ++i) one(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < m_list.size(); i += threads) one(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration

namespace {

struct SlotEvent {
  std::size_t self;
  std::vector<std::size_t> compared;
};

/// Visits every outcome tuple in odometer order, maintaining prefix products
/// of the weights so each step costs O(changed digits).
template <typename W, typename Sum>
Sum enumerate_outcomes(std::size_t K, const std::vector<W>& weight, const std::vector<SlotEvent>& events) {
  const std::size_t atoms = weight.size();
  std::vector<std::size_t> value(K, 0);
  std::vector<W> prefix(K + 1, W(1));
  for (std::size_t d = 0; d < K; ++d) prefix[d + 1] = prefix[d] * weight[0];
  Sum total = 0;
  while (true) {
    bool ok = true;
    for (const auto& ev : events) {
      for (auto s : ev.compared) {
        if (!(value[ev.self] > value[s])) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) total += Sum(prefix[K]);

    std::size_t d = K;
    while (d > 0) {
      --d;
      if (++value[d] < atoms) break;
      value[d] = 0;
      if (d == 0) return total;
    }
    for (std::size_t e = d; e < K; ++e) prefix[e + 1] = prefix[e] * weight[value[e]];
  }
}

}  // namespace

DiscreteProbability exhaustive_discrete_oracle(const ValidatedPlan& plan, std::span<const std::size_t> positions,
                                               const DiscreteModel& model) {
  check_positions(plan, positions);
  const auto relevant = relevant_indices(plan, EventQuery::all_of(positions));
  const std::size_t K = relevant.size();
  const std::size_t atoms = model.atoms();
  const double states = std::pow(static_cast<double>(atoms), static_cast<double>(K));
  if (states > 1e7) {
    throw Error(ErrorCode::StateSpaceTooLarge, std::to_string(atoms) + "^" + std::to_string(K) + " outcomes");
  }
  auto slot = [&](Index idx) {
    return static_cast<std::size_t>(std::lower_bound(relevant.begin(), relevant.end(), idx) - relevant.begin());
  };
  std::vector<SlotEvent> events;
  for (auto t : positions) {
    SlotEvent ev{slot(plan.index(t)), {}};
    for (Index c : plan.comparison_set(t)) ev.compared.push_back(slot(c));
    events.push_back(std::move(ev));
  }

  DiscreteProbability out;
  if (model.exact()) {
    // Integer weights over a common denominator L: P = sum prod w / L^K.
    BigInt L = 1;
    for (const auto& q : *model.exact_masses) L = boost::multiprecision::lcm(L, denominator(q));
    std::vector<BigInt> w(atoms);
    for (std::size_t l = 0; l < atoms; ++l) {
      w[l] = numerator((*model.exact_masses)[l]) * (L / denominator((*model.exact_masses)[l]));
    }
    const BigInt scale = boost::multiprecision::pow(L, static_cast<unsigned>(K));
    BigInt total;
    if (boost::multiprecision::msb(scale) < 126) {
      std::vector<unsigned __int128> w128(atoms);
      for (std::size_t l = 0; l < atoms; ++l) {
        const BigInt hi = w[l] >> 64;
        const BigInt lo = w[l] - (hi << 64);
        w128[l] = (static_cast<unsigned __int128>(hi.convert_to<std::uint64_t>()) << 64) |
                  lo.convert_to<std::uint64_t>();
      }
      const auto sum = enumerate_outcomes<unsigned __int128, unsigned __int128>(K, w128, events);
      total = BigInt(static_cast<std::uint64_t>(sum >> 64));
      total <<= 64;
      total += BigInt(static_cast<std::uint64_t>(sum));
    } else {
      total = enumerate_outcomes<BigInt, BigInt>(K, w, events);
    }
    out.exact = Rational(total, scale);
    out.value = to_double(*out.exact);
  } else {
    out.value = enumerate_outcomes<double, double>(K, model.masses, events);
  }
  return out;
}

}  // namespace partrec
