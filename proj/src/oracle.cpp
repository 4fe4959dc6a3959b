#include "pufent/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rational_simplex.hpp"

namespace pufent {

namespace {

// Threshold functions are unate: monotone (increasing or decreasing) in
// every input. Failing this rules a candidate out without an LP.
bool is_unate(const ResponseVector& rv) {
  const int n = rv.size();
  for (int i = 0; i < n; ++i) {
    const std::uint64_t flip = std::uint64_t{1} << i;
    bool increasing = true;
    bool decreasing = true;
    for (std::uint64_t c = 0; c < rv.num_challenges(); ++c) {
      if ((c & flip) != 0) continue;
      const int plus = rv.value(c);
      const int minus = rv.value(c | flip);
      if (plus < minus) increasing = false;
      if (plus > minus) decreasing = false;
    }
    if (!increasing && !decreasing) return false;
  }
  return true;
}

// Integer perceptron over the half-space challenges. A clean epoch certifies
// the weights exactly; exhausting the budget proves nothing.
std::optional<WeightVector> perceptron(const ResponseVector& rv, int max_epochs) {
  const int n = rv.size();
  const std::uint64_t half = rv.num_challenges() / 2;
  std::vector<std::int64_t> w(n, 0);
  for (int epoch = 0; epoch < max_epochs; ++epoch) {
    bool clean = true;
    for (std::uint64_t h = 0; h < half; ++h) {
      const std::uint64_t c = h << 1;
      const int f = rv.value(c);
      std::int64_t dot = 0;
      for (int i = 0; i < n; ++i) dot += ((c >> i) & 1u) != 0 ? -w[i] : w[i];
      if (f * dot > 0) continue;
      clean = false;
      for (int i = 0; i < n; ++i) w[i] += f * (((c >> i) & 1u) != 0 ? -1 : 1);
    }
    if (clean) return WeightVector(w.begin(), w.end());
  }
  return std::nullopt;
}

// Variables a_1..a_n, b_1..b_n, t >= 0 with w = a - b. Constraints
// f(c)(c . w) >= t over the half-space (the other half repeats them by
// self-duality), a_i, b_i <= 1 and t <= 1.
std::optional<WeightVector> lp_witness(const ResponseVector& rv) {
  const int n = rv.size();
  const std::uint64_t half = rv.num_challenges() / 2;
  const std::size_t vars = 2 * static_cast<std::size_t>(n) + 1;
  const std::size_t t_col = vars - 1;

  detail::LinearProgram lp;
  lp.c.assign(vars, 0);
  lp.c[t_col] = 1;
  for (std::uint64_t h = 0; h < half; ++h) {
    const std::uint64_t c = h << 1;
    const int f = rv.value(c);
    std::vector<mpq_class> row(vars, 0);
    for (int i = 0; i < n; ++i) {
      const int ci = ((c >> i) & 1u) != 0 ? -1 : 1;
      row[i] = -f * ci;
      row[n + i] = f * ci;
    }
    row[t_col] = 1;
    lp.a.push_back(std::move(row));
    lp.b.emplace_back(0);
  }
  for (std::size_t j = 0; j < vars; ++j) {
    std::vector<mpq_class> row(vars, 0);
    row[j] = 1;
    lp.a.push_back(std::move(row));
    lp.b.emplace_back(1);
  }

  const detail::LpSolution solution = detail::solve_max(lp);
  if (!solution.bounded || sgn(solution.objective) <= 0) return std::nullopt;
  WeightVector w(n);
  for (int i = 0; i < n; ++i) w[i] = mpq_class(solution.x[i] - solution.x[n + i]).get_d();
  return w;
}

}  // namespace

std::optional<WeightVector> threshold_witness(const ResponseVector& rv) {
  if (!is_unate(rv)) return std::nullopt;
  if (auto w = perceptron(rv, 64)) return w;
  return lp_witness(rv);
}

std::optional<WeightVector> threshold_witness_lp(const ResponseVector& rv) {
  return lp_witness(rv);
}

bool is_threshold(const ResponseVector& rv) { return threshold_witness(rv).has_value(); }

std::vector<ResponseVector> all_pufs(int n) {
  if (n < 1 || n > kMaxCensusN) {
    throw UnsupportedN("census supports n in [1, " + std::to_string(kMaxCensusN) + "], got " +
                       std::to_string(n));
  }
  const std::uint64_t half = std::uint64_t{1} << (n - 1);
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  const std::uint64_t candidates = std::uint64_t{1} << half;

  std::vector<ResponseVector> pufs;
  for (std::uint64_t assignment = 0; assignment < candidates; ++assignment) {
    ResponseVector rv(n);
    for (std::uint64_t h = 0; h < half; ++h) {
      const bool positive = ((assignment >> h) & 1u) != 0;
      rv.set(h << 1, positive);
      rv.set(all ^ (h << 1), !positive);
    }
    if (is_threshold(rv)) pufs.push_back(std::move(rv));
  }
  return pufs;
}

std::vector<CensusEntry> enumerate_pufs(int n) {
  std::map<ClassKey, CensusEntry, std::greater<>> classes;
  for (ResponseVector& rv : all_pufs(n)) {
    const ChowVector p = chow_from_response(rv);
    ClassKey key = canonical_form(p);
    auto [it, inserted] = classes.try_emplace(key);
    CensusEntry& entry = it->second;
    if (inserted) {
      entry.key = key;
      entry.orbit_size = orbit_size(key);
    }
    ++entry.members;
    if (p == key) entry.representative = std::move(rv);
  }
  std::vector<CensusEntry> census;
  census.reserve(classes.size());
  for (auto& [key, entry] : classes) census.push_back(std::move(entry));
  return census;
}

bool verify_chow_injectivity(int n) {
  std::set<ChowVector> seen;
  for (const ResponseVector& rv : all_pufs(n)) {
    if (!seen.insert(chow_from_response(rv)).second) return false;
  }
  return true;
}

std::map<ClassKey, double, std::greater<>> exact_class_probabilities_n3() {
  using boost::math::quadrature::gauss_kronrod;
  constexpr double kTolerance = 1e-13;
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  auto density = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); };

  // P(|X2| + |X3| < r) = int_0^r 2 phi(a) (2 Phi(r - a) - 1) da.
  auto sum_of_abs_below = [&](double r) {
    if (r <= 0.0) return 0.0;
    auto inner = [&](double a) { return 2.0 * density(a) * std::erf((r - a) * inv_sqrt2); };
    return gauss_kronrod<double, 61>::integrate(inner, 0.0, r, 15, kTolerance);
  };
  // P(X1 > |X2| + |X3|) = int_0^inf phi(x) P(|X2| + |X3| < x) dx.
  auto outer = [&](double x) { return density(x) * sum_of_abs_below(x); };
  const double dictator_puf =
      gauss_kronrod<double, 61>::integrate(outer, 0.0, std::numeric_limits<double>::infinity(), 15,
                                           kTolerance);

  std::map<ClassKey, double, std::greater<>> classes;
  const double dictator_class = 6.0 * dictator_puf;
  classes[ClassKey{4, 0, 0}] = dictator_class;
  classes[ClassKey{2, 2, 2}] = 1.0 - dictator_class;
  return classes;
}

double exact_power_sum(const std::map<ClassKey, double, std::greater<>>& classes) {
  double sum = 0.0;
  for (const auto& [key, q] : classes) sum += q * q / to_double(orbit_size(key));
  return sum;
}

ClassMap census_map(int n, const std::vector<CensusEntry>& census) {
  ClassMap map;
  map.n = n;
  map.distribution = std::nullopt;
  map.exact = true;
  for (const CensusEntry& entry : census) {
    const auto size = static_cast<std::uint64_t>(entry.orbit_size);
    map.counts.emplace(entry.key, size);
    map.rounds += size;
  }
  return map;
}

}  // namespace pufent
