// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "influence/core.h"
#include "influence/estimators.h"
#include "influence/games.h"
#include "influence/linear.h"
#include "influence/measures.h"
#include "influence/pipeline.h"

using namespace influence;

namespace {

const std::string kData = INFLUENCE_TEST_DATA;
const std::string kCli = INFLUENCE_CLI_PATH;

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_s > 0 && secs >= budget_s) {
    out.fail("over time budget of " + std::to_string(budget_s) + " s");
  }
  std::printf("[%s] %2d %-34s %8.2f s  %s\n", out.ok ? "PASS" : "FAIL", id, name, secs,
              out.detail.c_str());
  std::fflush(stdout);
  if (!out.ok) ++failures;
}

FeatureSpace numbered_space(const std::vector<std::size_t>& sizes) {
  std::vector<Feature> spec;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    Feature f{"f" + std::to_string(i + 1), {}};
    for (std::size_t s = 0; s < sizes[i]; ++s) f.states.push_back(std::to_string(s));
    spec.push_back(std::move(f));
  }
  return build_space(std::move(spec));
}

std::vector<std::size_t> random_sizes(std::mt19937_64& rng, std::uint64_t max_profiles) {
  std::uniform_int_distribution<std::size_t> nf(1, 5), ns(1, 6);
  for (;;) {
    std::vector<std::size_t> sizes(nf(rng));
    std::uint64_t prod = 1;
    for (auto& s : sizes) prod *= (s = ns(rng));
    if (prod <= max_profiles) return sizes;
  }
}

LabeledDataset random_binary(std::mt19937_64& rng, const std::vector<std::size_t>& sizes,
                             double density) {
  FeatureSpace space = numbered_space(sizes);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Record> records;
  for (ProfileKey k = 0; k < space.profile_count(); ++k) {
    if (u(rng) < density) records.push_back({decode(space, k), Value::binary(u(rng) < 0.5)});
  }
  if (records.empty()) records.push_back({decode(space, 0), Value::binary(true)});
  return build_dataset(std::move(space), std::move(records));
}

TUGame table_game(std::size_t n, std::uint64_t table) {
  return TUGame::from_function(n, [&](Coalition s) { return static_cast<double>((table >> s) & 1U); });
}

// ---- 1 ----
Outcome banzhaf_coincidence() {
  Outcome out;
  // Derive the constant from the 2-player games before using it.
  std::int64_t factor = -1;
  for (std::uint64_t t = 0; t < 16; ++t) {
    const auto g = table_game(2, t);
    const auto d = game_to_dataset(g);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto swings = swing_count(g, i);
      const auto c = chi(d, i);
      if (swings == 0) {
        if (c != 0) out.fail("chi > 0 with no swings");
        continue;
      }
      if (c % static_cast<std::int64_t>(swings) != 0) out.fail("non-integer ratio");
      const std::int64_t r = c / static_cast<std::int64_t>(swings);
      if (factor == -1) factor = r;
      if (r != factor) out.fail("ratio not constant over 2-player games");
    }
  }
  if (factor != 2) out.fail("2-player factor is " + std::to_string(factor));

  std::mt19937_64 rng(2024);
  std::size_t checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + trial % 2;
    const auto g = table_game(n, rng() & ((std::uint64_t{1} << (1U << n)) - 1));
    const auto d = game_to_dataset(g);
    for (std::size_t i = 0; i < n; ++i) {
      ++checked;
      if (chi(d, i) != factor * static_cast<std::int64_t>(swing_count(g, i))) {
        out.fail("mismatch in random game " + std::to_string(trial));
      }
    }
  }
  if (out.ok) out.detail = "factor 2 derived; " + std::to_string(32 + checked) + " player checks";
  return out;
}

// ---- 2 ----
Outcome uniqueness_identities() {
  Outcome out;
  std::mt19937_64 rng(77);
  std::size_t partial = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const double density = trial % 2 == 0 ? 1.0 : 0.3 + 0.6 * (trial % 7) / 7.0;
    const auto d = random_binary(rng, random_sizes(rng, 256), density);
    if (!d.is_full()) ++partial;
    const auto unit = WeightFunction::uniform(d, 1.0);
    for (std::size_t i = 0; i < d.space().feature_count(); ++i) {
      const auto c = chi(d, i);
      const double cd = static_cast<double>(c);
      if (chi_win_loss_form(d, i) != c || chi_distance(d, PseudoDistance::discrete(), i) != cd ||
          chi_weighted(d, unit, i) != cd) {
        out.fail("identity broken in dataset " + std::to_string(trial));
      }
    }
  }
  if (out.ok) out.detail = "500 datasets, " + std::to_string(partial) + " partial";
  return out;
}

// ---- 3 ----
Outcome axiom_suite() {
  Outcome out;
  const MeasureUnderTest measure = [](const LabeledDataset& d, std::size_t i) {
    return static_cast<double>(chi(d, i));
  };
  AxiomCheckOptions opts;
  opts.trials = 500;
  opts.seed = 31;
  std::vector<AxiomVerdict> verdicts{check_axiom_dummy(measure, opts)};
  for (auto& v : check_axiom_symmetry(measure, opts)) verdicts.push_back(v);
  verdicts.push_back(check_axiom_disjoint_union(measure, opts));
  for (const auto& v : verdicts) {
    if (v.trials != 500 || !v.passed()) out.fail(v.axiom + " failed: " + v.witness.value_or(""));
  }
  const auto add = check_axiom_additivity(measure, opts);
  if (add.passed() || !add.witness) out.fail("no additivity counterexample");
  if (out.ok) {
    out.detail = "4 axioms x 500 trials hold; additivity fails " +
                 std::to_string(add.failures) + "/" + std::to_string(add.trials);
  }
  return out;
}

// ---- 4 ----
void ordered_factorizations(std::uint64_t limit, std::vector<std::size_t>& prefix,
                            std::uint64_t product,
                            std::vector<std::vector<std::size_t>>& out) {
  if (!prefix.empty()) out.push_back(prefix);
  for (std::size_t k = 2; product * k <= limit; ++k) {
    prefix.push_back(k);
    ordered_factorizations(limit, prefix, product * k, out);
    prefix.pop_back();
  }
}

Outcome state_influence_laws() {
  Outcome out;
  std::vector<std::vector<std::size_t>> spaces;
  std::vector<std::size_t> prefix;
  ordered_factorizations(64, prefix, 1, spaces);
  std::uint64_t anchors = 0;
  for (const auto& sizes : spaces) {
    const FeatureSpace space = numbered_space(sizes);
    for (ProfileKey a = 0; a < space.profile_count(); ++a) {
      ++anchors;
      const Profile anchor = decode(space, a);
      const auto d = singleton_dataset(space, anchor);
      for (std::size_t i = 0; i < sizes.size(); ++i) {
        double total = 0;
        for (StateIndex b = 0; b < sizes[i]; ++b) {
          const double z = zeta_state(d, i, b, true);
          total += z;
          const double expected = b == anchor[i] ? static_cast<double>(sizes[i]) - 1 : -1.0;
          if (z != expected) out.fail("singleton value off");
        }
        if (total != 0.0) out.fail("zeta does not sum to 0");
      }
    }
  }
  // Sum law on arbitrary labelings as well.
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = random_binary(rng, random_sizes(rng, 64), 1.0);
    for (std::size_t i = 0; i < d.space().feature_count(); ++i) {
      double total = 0;
      for (StateIndex b = 0; b < d.space().state_count(i); ++b) total += zeta_state(d, i, b, true);
      if (total != 0.0) out.fail("zeta does not sum to 0 on a random labeling");
    }
  }
  if (out.ok) {
    out.detail = std::to_string(spaces.size()) + " spaces, " + std::to_string(anchors) +
                 " anchors";
  }
  return out;
}

// ---- 5 ----
Outcome weighted_identity() {
  Outcome out;
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = random_binary(rng, random_sizes(rng, 128), 1.0);
    std::vector<double> w(d.size());
    for (auto& x : w) x = u(rng);
    if (trial % 10 == 0) w[0] = 0;  // zero weights are allowed
    const auto wf = WeightFunction::from_points(d, w);
    const auto& space = d.space();
    for (std::size_t i = 0; i < space.feature_count(); ++i) {
      // Group by context with plain maps: context -> (w(W), w(L)).
      std::map<ProfileKey, std::array<double, 2>> sides;
      for (std::size_t p = 0; p < d.size(); ++p) {
        sides[space.with_state(d.key(p), i, 0)][d.binary_value(p)] += w[p];
      }
      for (auto mode : {ConditionalWeighting::kPoint, ConditionalWeighting::kConditional}) {
        double expected = 0;
        for (const auto& [ctx, wl] : sides) {
          const double context = wl[0] + wl[1];
          if (mode == ConditionalWeighting::kPoint) {
            expected += 2 * 1.0 * wl[1] * wl[0];
          } else if (context > 0) {
            expected += 2 * context * (wl[1] / context) * (wl[0] / context);
          }
        }
        const double got = chi_weighted_conditional(d, wf, i, mode);
        const double rel = std::abs(got - expected) / std::max(1e-300, std::abs(expected));
        if (expected == 0 ? got != 0 : rel > 1e-9) out.fail("relative error " + std::to_string(rel));
        if (expected != 0) worst = std::max(worst, rel);
      }
    }
  }
  if (out.ok) {
    std::ostringstream s;
    s << "200 instances, worst rel err " << worst;
    out.detail = s.str();
  }
  return out;
}

// ---- 6 ----
Outcome linear_one_feature() {
  Outcome out;
  if (chi_linear_1d_closed(2, 1) != 0.5) out.fail("closed form at (2,1) is not 0.5");
  const LinearClassifier clf({2}, 1);
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto e = chi_linear_mc(clf, 0, 1000000, seed);
    if (std::abs(e.chi.value - 0.5) <= e.chi.half_width) ++inside;
  }
  if (inside < 95) out.fail("MC inside band on " + std::to_string(inside) + "/100 seeds");
  for (double q : {0.2, 0.5, 1.0, 1.7}) {
    double best_w = 0, best = -1;
    for (int k = 1; k <= 20000; ++k) {
      const double w = k * 0.0005;
      const double v = chi_linear_1d_closed(w, q);
      if (v > best) {
        best = v;
        best_w = w;
      }
    }
    if (std::abs(best_w - 2 * q) > 0.0005) out.fail("argmax off 2q for q=" + std::to_string(q));
  }
  if (out.ok) out.detail = "MC inside band on " + std::to_string(inside) + "/100 seeds; argmax = 2q";
  return out;
}

// ---- 7 ----
Outcome linear_two_features() {
  Outcome out;
  struct Case {
    double w1, w2, q;
  };
  double worst = 0;
  for (const Case c : {Case{2, -1, 1.5}, Case{2, -1, 0.5}, Case{2, -1, -0.2}, Case{1, -2, 0.5}}) {
    const auto cf = chi_linear_2d_closed(c.w1, c.w2, c.q);
    const LinearClassifier clf({c.w1, c.w2}, c.q);
    const double closed[2] = {cf.chi1, cf.chi2};
    double mc[2], grid[2];
    for (std::size_t i = 0; i < 2; ++i) {
      mc[i] = chi_linear_mc(clf, i, 1000000, 7).chi.value;
      grid[i] = chi_linear_grid(clf, i, 400);
      const double err = std::max(std::abs(mc[i] - closed[i]), std::abs(grid[i] - closed[i]));
      worst = std::max(worst, err);
      if (err > 0.01) {
        std::ostringstream s;
        s << "(" << c.w1 << "," << c.w2 << "," << c.q << ") feature " << i + 1 << " off by " << err;
        out.fail(s.str());
      }
    }
    // Ordering follows |w| in all three computations.
    const bool first_heavier = std::abs(c.w1) > std::abs(c.w2);
    for (const double* v : {closed, static_cast<const double*>(mc), static_cast<const double*>(grid)}) {
      if ((v[0] > v[1]) != first_heavier) out.fail("ordering does not follow |w|");
    }
  }
  if (out.ok) {
    std::ostringstream s;
    s << "4 cases, worst abs err " << worst;
    out.detail = s.str();
  }
  return out;
}

// ---- 8 ----
Outcome monotonicity_sweep() {
  Outcome out;
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> mag(0.2, 3.0), thr(-1.0, 3.0);
  std::size_t confirmed = 0, inconclusive = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w(3);
    for (auto& x : w) x = mag(rng) * ((rng() & 1U) ? 1 : -1);
    double q = thr(rng);
    while (q == -1.0) q = thr(rng);
    MonotonicityOptions opts;
    opts.seed = static_cast<std::uint64_t>(trial);
    const auto rep = check_weight_monotonicity(LinearClassifier(w, q), opts);
    if (rep.violations() != 0) out.fail("violation in classifier " + std::to_string(trial));
    confirmed += rep.confirmed();
    for (const auto& p : rep.pairs) inconclusive += p.verdict == PairVerdict::kInconclusive;
  }
  if (out.ok) {
    out.detail = "0 violations; " + std::to_string(confirmed) + " confirmed, " +
                 std::to_string(inconclusive) + " inconclusive of 60 pairs";
  }
  return out;
}

// ---- 9 ----
Outcome estimator_calibration() {
  Outcome out;
  std::mt19937_64 rng(99);
  std::size_t runs = 0, covered = 0;
  double sum = 0, sum_sq = 0;
  for (int ds = 0; ds < 50; ++ds) {
    const auto d = random_binary(rng, random_sizes(rng, 256), ds % 3 == 0 ? 1.0 : 0.7);
    const std::size_t i = ds % d.space().feature_count();
    const double exact = static_cast<double>(chi(d, i));
    const double scale = static_cast<double>(d.size()) * d.space().state_count(i);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto e = sample_chi(d, i, {20000, seed, 0.95});
      ++runs;
      if (std::abs(e.value - exact) <= e.half_width) ++covered;
      // Errors on the common [0, 1] scale.
      const double err = (e.value - exact) / scale;
      sum += err;
      sum_sq += err * err;
    }
  }
  const double n = static_cast<double>(runs);
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq - n * mean * mean) / (n - 1) / n);
  const double coverage = static_cast<double>(covered) / n;
  if (coverage < 0.95) out.fail("coverage " + std::to_string(coverage));
  if (std::abs(mean) >= 3 * se) out.fail("bias " + std::to_string(mean / se) + " SE");
  std::ostringstream s;
  s << "coverage " << covered << "/" << runs << ", bias " << mean / se << " SE";
  if (out.ok) out.detail = s.str();
  return out;
}

// ---- 10 ----
Outcome pipeline_reproduction() {
  Outcome out;
  const auto table = ingest_counts_csv(kData + "/synthetic_counts.csv");
  if (table.space.profile_count() != 12) out.fail("space is not 2x3x2");
  const auto result = run_pipeline(table);
  const std::size_t language = table.space.feature_index("language");
  bool found = false;
  for (const auto& item : result.items) {
    if (item.item != "es_ad") continue;
    found = true;
    for (std::size_t i = 0; i < item.per_feature.size(); ++i) {
      if (i != language && item.per_feature[i] >= item.per_feature[language]) {
        out.fail("es_ad influence not maximized by language");
      }
    }
  }
  if (!found) out.fail("es_ad missing from the report");
  for (std::size_t i = 0; i < result.vector_influence.size(); ++i) {
    if (i != language &&
        result.vector_influence[i].normalized >= result.vector_influence[language].normalized) {
      out.fail("language is not first in the vector ranking");
    }
  }
  if (out.ok) {
    std::ostringstream s;
    s << "vector influence";
    for (const auto& f : result.vector_influence) s << " " << f.feature << "=" << f.normalized;
    out.detail = s.str();
  }
  return out;
}

// ---- 11 ----
bool capture(const std::string& command, std::string& output) {
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return false;
  output.clear();
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
  return pclose(pipe) == 0;
}

Outcome cli_determinism() {
  Outcome out;
  const std::string cli = "'" + kCli + "' ";
  const std::string counts = " --counts '" + kData + "/synthetic_counts.csv'";
  const std::string input = " --input '" + kData + "/and.csv'";
  const std::vector<std::string> invocations{
      "compute" + input + " --measure chi --all",
      "compute" + input + " --measure chi-norm --format csv",
      "state" + input + " --zeta",
      "weighted" + input + " --weights-file '" + kData + "/and_unit_weights.csv' --form conditional",
      "distance" + input + " --distance abs",
      "sample" + input + " --samples 200000 --seed 17",
      "sample" + input + " --samples 200000 --seed 17 --distance discrete --format csv",
      "linear --weights 2,-1 --threshold 1.5 --method closed",
      "linear --weights 2,-1 --threshold 0.5 --method mc --samples 300000 --seed 4",
      "linear --weights 2,-1 --threshold -0.2 --method grid --resolution 100",
      "linear --weights 1.5,-0.5,2 --threshold 0.8 --method monotonicity --samples 100000 --seed 2",
      "check-axioms --trials 100 --seed 6",
      "pipeline" + counts,
      "pipeline" + counts + " --normalization per-point --format csv",
  };
  for (const auto& args : invocations) {
    std::string a, b;
    const bool ok_a = capture(cli + args + " 2>/dev/null", a);
    const bool ok_b = capture(cli + args + " 2>/dev/null", b);
    if (!ok_a || !ok_b) out.fail("non-zero exit: " + args);
    else if (a.empty() || a != b) out.fail("output differs: " + args);
  }
  if (out.ok) out.detail = std::to_string(invocations.size()) + " invocations byte-identical";
  return out;
}

}  // namespace

int main() {
  criterion(1, "banzhaf-coincidence", 5, banzhaf_coincidence);
  criterion(2, "uniqueness-identities", 10, uniqueness_identities);
  criterion(3, "axiom-suite", 30, axiom_suite);
  criterion(4, "state-influence-laws", 30, state_influence_laws);
  criterion(5, "weighted-identity", 10, weighted_identity);
  criterion(6, "linear-one-feature", 60, linear_one_feature);
  criterion(7, "linear-two-feature-closed-forms", 180, linear_two_features);
  criterion(8, "monotonicity-sweep", 180, monotonicity_sweep);
  criterion(9, "estimator-calibration", 120, estimator_calibration);
  criterion(10, "pipeline-qualitative", 5, pipeline_reproduction);
  criterion(11, "cli-determinism", 0, cli_determinism);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures;
}
