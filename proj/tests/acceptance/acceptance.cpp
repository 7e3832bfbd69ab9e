// Acceptance run: one PASS/FAIL line per primary criterion.
//
// Exit status counts failed checks that are not listed in kKnownUnattainable.
// Those checks are still run and still print FAIL; the list only keeps a
// documented data conflict from masking new regressions.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "metaseo/engine.hpp"
#include "metaseo/error.hpp"
#include "metaseo/eval.hpp"
#include "metaseo/merge.hpp"
#include "metaseo/rank.hpp"
#include "metaseo/url.hpp"

using namespace metaseo;

namespace {

// Tolerances.
constexpr double kPrintedTwoDp = 0.005;
constexpr double kFourDp = 0.00005;
constexpr double kRecallSum = 1e-12;
constexpr double kDeskPr = 0.001;
constexpr double kCycle = 1e-9;
constexpr double kCycleTolerance = 1e-12;
constexpr double kPrecisionSeconds = 1.0;
constexpr double kSuiteSeconds = 30.0;

const std::set<std::string> kKnownUnattainable = {
    // 22/50 and 19/50 average to 0.41; 0.42 is the mean of the printed cells.
    "precision/google-mean-0.42",
    // The two published alcoholism lists have 9 rows each, 4 shared: 14 URLs.
    "merge/fixture-exactly-16",
};

struct Check {
  std::string id;
  bool ok;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::vector<Check> checks;

  void add(const std::string& id, bool ok, const std::string& detail = {}) {
    checks.push_back({name + "/" + id, ok, detail});
  }
};

int unexpected_failures = 0;

void report(const Criterion& c) {
  bool all = std::all_of(c.checks.begin(), c.checks.end(), [](const Check& k) { return k.ok; });
  std::cout << (all ? "PASS " : "FAIL ") << c.name << '\n';
  for (const auto& k : c.checks) {
    bool known = kKnownUnattainable.count(k.id) > 0;
    std::cout << "    " << (k.ok ? "ok  " : (known ? "FAIL (known) " : "FAIL ")) << k.id;
    if (!k.detail.empty()) std::cout << ": " << k.detail;
    std::cout << '\n';
    if (!k.ok && !known) ++unexpected_failures;
  }
}

std::filesystem::path data(const std::string& rel) { return std::filesystem::path(METASEO_TEST_DATA) / rel; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

Criterion precision_criterion() {
  Criterion c{"precision"};
  auto start = std::chrono::steady_clock::now();
  auto report = evaluate(parse_judgments_csv(slurp(data("fixtures/judgments.csv"))));
  double elapsed = seconds_since(start);

  auto cell = [&](const std::string& e, const std::string& q) -> const PrecisionCell& {
    for (const auto& p : report.precision) {
      if (p.engine == e && p.query == q) return p;
    }
    throw std::runtime_error("missing cell " + e + "/" + q);
  };
  auto mean = [](const std::vector<std::pair<std::string, double>>& v, const std::string& e) {
    for (const auto& [k, m] : v) {
      if (k == e) return m;
    }
    return std::nan("");
  };

  const auto& g = cell("Google", "Alcoholism");
  const auto& i = cell("iral", "Alcoholism");
  const auto& b = cell("Bing", "local computer shop");
  c.add("google-alcoholism-0.44", near(g.precision, 0.44, kPrintedTwoDp), num(g.precision));
  c.add("iral-alcoholism-0.48", near(i.precision, 0.48, kPrintedTwoDp), num(i.precision));
  c.add("bing-shop-0.24", near(b.precision, 0.24, kPrintedTwoDp), num(b.precision));

  double gm = mean(report.mean_precision, "Google");
  c.add("google-mean-0.42", near(gm, 0.42, kPrintedTwoDp),
        "computed (22/50 + 19/50)/2 = " + num(gm) + "; mean of printed cells = " +
            num(mean(report.mean_of_reported, "Google")));

  const auto& bing_alc = cell("Bing", "Alcoholism");
  const auto& google_shop = cell("Google", "local computer shop");
  c.add("flag-bing-alcoholism-0.31", bing_alc.discrepancy && near(bing_alc.precision, 0.32, 1e-12),
        "computed " + num(bing_alc.precision) + (bing_alc.discrepancy ? ", flagged" : ", not flagged"));
  c.add("flag-google-shop-0.40", google_shop.discrepancy && near(google_shop.precision, 0.38, 1e-12),
        "computed " + num(google_shop.precision) + (google_shop.discrepancy ? ", flagged" : ", not flagged"));
  c.add("runtime-under-1s", elapsed < kPrecisionSeconds, num(elapsed) + " s");
  return c;
}

Criterion recall_criterion() {
  Criterion c{"relative-recall"};
  auto report = evaluate(parse_judgments_csv(slurp(data("fixtures/judgments.csv"))));
  auto value = [&](const std::string& q, const std::string& e) {
    for (const auto& row : report.recall) {
      if (row.query != q) continue;
      for (const auto& [k, v] : row.recall) {
        if (k == e) return v;
      }
    }
    return std::nan("");
  };
  auto flagged = [&](const std::string& q, const std::string& e) {
    for (const auto& row : report.recall) {
      if (row.query != q) continue;
      for (std::size_t k = 0; k < row.recall.size(); ++k) {
        if (row.recall[k].first == e) return static_cast<bool>(row.discrepancy[k]);
      }
    }
    return false;
  };
  auto two_dp = [](double v) { return std::round(v * 100.0) / 100.0; };
  auto four_dp = [](double v) { return std::round(v * 10000.0) / 10000.0; };

  double ga = value("Alcoholism", "Google"), ba = value("Alcoholism", "Bing");
  c.add("alcoholism-0.51/0.49", near(two_dp(ga), 0.51, 1e-12) && near(two_dp(ba), 0.49, 1e-12),
        num(ga) + " / " + num(ba));
  double gs = value("local computer shop", "Google"), bs = value("local computer shop", "Bing");
  c.add("shop-0.4667/0.5333", near(four_dp(gs), 0.4667, kFourDp / 10) && near(four_dp(bs), 0.5333, kFourDp / 10),
        num(gs) + " / " + num(bs));
  double ia = value("Alcoholism", "iral"), is = value("local computer shop", "iral");
  c.add("iral-alcoholism-7.44e-7", near(ia, 7.44e-7, 0.005e-7), num(ia));
  c.add("iral-shop-8.77e-8", near(is, 8.77e-8, 0.005e-8), num(is));
  c.add("iral-shop-printed-cell-flagged", flagged("local computer shop", "iral") && !flagged("Alcoholism", "iral"));
  double worst = 0.0;
  for (const auto& row : report.recall) {
    double s = 0.0;
    for (const auto& [k, v] : row.recall) s += v;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  c.add("sums-to-one", worst <= kRecallSum, "max |sum - 1| = " + num(worst));
  return c;
}

Criterion pagerank_criterion() {
  Criterion c{"pagerank"};
  LinkGraph desk;
  for (const char* n : {"B", "T1", "T2", "A"}) desk.add_node(n);
  desk.add_edge("B", "T1");
  desk.add_edge("T1", "A");
  desk.add_edge("T2", "A");
  auto pass = pagerank_single_pass(desk, {"B", "T1", "T2", "A"});
  double a = pass[*desk.index("A")];
  c.add("desk-PR(A)-0.5134", near(a, 0.5134, kDeskPr), num(a));

  LinkGraph cyc;
  cyc.add_edge("x", "y");
  cyc.add_edge("y", "x");
  PageRankOptions opt;
  opt.tolerance = kCycleTolerance;
  auto r = pagerank(cyc, opt);
  c.add("two-cycle-1.0", r.converged && r.iterations <= 200 && near(r.scores[0], 1.0, kCycle) &&
                             near(r.scores[1], 1.0, kCycle),
        num(r.scores[0]) + " after " + std::to_string(r.iterations) + " iterations");

  LinkGraph iso;
  iso.add_node("z");
  auto z = pagerank(iso).scores[0];
  // 1 - 0.85 is one ulp above the double nearest 0.15
  c.add("isolated-0.15", z == 1.0 - kDefaultDamping && std::abs(z - 0.15) <= std::nextafter(0.15, 1.0) - 0.15,
        num(z) + ", bit-equal to 1 - d");
  return c;
}

std::vector<SearchResultRecord> random_list(std::mt19937& rng, const std::string& provider) {
  std::vector<SearchResultRecord> out;
  for (int i = 0, n = static_cast<int>(rng() % 41); i < n; ++i) {
    SearchResultRecord r;
    const char* hosts[] = {"a.com", "www.a.com", "b.org", "c.net", "d.io"};
    r.link = std::string(rng() % 2 ? "http://" : "HTTP://") + hosts[rng() % 5] + "/p" + std::to_string(rng() % 25) +
             (rng() % 3 == 0 ? "/" : "") + (rng() % 4 == 0 ? "#frag" : "");
    r.provider_name = provider;
    r.provider_rank = i + 1;
    out.push_back(r);
  }
  return out;
}

Criterion merge_criterion() {
  Criterion c{"merge"};
  std::mt19937 rng(1234);
  bool distinct = true, stable = true, idempotent = true, capped = true;
  for (int t = 0; t < 1000; ++t) {
    auto g = random_list(rng, "g");
    auto b = random_list(rng, "b");
    auto out = merge_dedupe({g, b});
    std::set<std::uint64_t> hashes;
    for (const auto& r : out) distinct &= hashes.insert(normalize_url(r.link).hash).second;
    for (const auto& p : {"g", "b"}) {
      int last = 0;
      for (const auto& r : out) {
        if (r.provider_name != p) continue;
        stable &= r.provider_rank > last;
        last = r.provider_rank;
      }
    }
    capped &= out.size() <= std::min<std::size_t>(kMaxMergedResults, g.size() + b.size());
    idempotent &= merge_dedupe({out}) == out;
  }
  c.add("hashes-distinct", distinct, "1000 random runs");
  c.add("per-provider-order", stable);
  c.add("idempotent", idempotent);
  c.add("bounded", capped);

  auto g = parse_any_wire(slurp(data("fixtures/serps/google/alcoholism.json")));
  auto b = parse_any_wire(slurp(data("fixtures/serps/bing/alcoholism.json")));
  for (auto& r : g) r.provider_name = "google";
  for (auto& r : b) r.provider_name = "bing";
  auto merged = merge_dedupe({g, b});
  std::set<std::string> uni;
  for (const auto* l : {&g, &b}) {
    for (const auto& r : *l) uni.insert(normalize_url(r.link).canonical);
  }
  c.add("fixture-equals-set-union", merged.size() == uni.size(), std::to_string(merged.size()) + " records");
  c.add("fixture-exactly-16", merged.size() == 16,
        std::to_string(g.size()) + " + " + std::to_string(b.size()) + " published rows, " +
            std::to_string(g.size() + b.size() - uni.size()) + " shared -> " + std::to_string(merged.size()));
  return c;
}

std::vector<SeoFeatureVector> random_set(std::mt19937& rng, std::size_t n) {
  std::vector<SeoFeatureVector> out(n);
  for (auto& f : out) {
    for (std::size_t i = 0; i < kSeoParamCount; ++i) {
      auto p = static_cast<SeoParam>(i);
      f.at(p) = is_binary(p) ? rng() % 2 : rng() % 500;
    }
  }
  return out;
}

Criterion ranking_criterion() {
  Criterion c{"ranking"};
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  bool bounded = true, argmax = true;
  for (int set_no = 0; set_no < 50; ++set_no) {
    auto set = random_set(rng, 2 + rng() % 40);
    auto norm = normalize_features(set);
    std::array<double, kSeoParamCount> w{};
    for (auto& x : w) x = unit(rng);
    auto best = [&](const WeightVector& wv) {
      std::size_t arg = 0;
      double top = -1.0;
      for (std::size_t i = 0; i < norm.size(); ++i) {
        double s = score(norm[i], wv);
        bounded &= s >= 0.0 && s <= 1.0;
        if (s > top) top = s, arg = i;
      }
      return arg;
    };
    auto base = best(WeightVector(w));
    for (int k = 0; k < 100; ++k) {
      double factor = std::exp(unit(rng) * 20.0 - 10.0);
      auto scaled = w;
      for (auto& x : scaled) x *= factor;
      argmax &= best(WeightVector(scaled)) == base;
    }
  }
  c.add("score-in-unit-interval", bounded);
  c.add("argmax-scale-invariant", argmax, "100 scalings x 50 result sets");

  bool monotone = true;
  for (int t = 0; t < 10000; ++t) {
    auto set = random_set(rng, 2 + rng() % 12);
    std::size_t who = rng() % set.size();
    auto p = static_cast<SeoParam>(rng() % kSeoParamCount);
    double before = score(normalize_features(set)[who], WeightVector{});
    auto& v = set[who].at(p);
    v = is_binary(p) ? 1 : v + 1 + rng() % 100;
    monotone &= score(normalize_features(set)[who], WeightVector{}) >= before;
  }
  c.add("raising-a-feature-never-lowers-score", monotone, "10000 cases");

  auto g = parse_any_wire(slurp(data("fixtures/serps/google/alcoholism.json")));
  auto b = parse_any_wire(slurp(data("fixtures/serps/bing/alcoholism.json")));
  for (auto& r : g) r.provider_name = "google";
  for (auto& r : b) r.provider_name = "bing";
  auto kb = JsonFileSynonyms::load(data("fixtures/kb/synonyms.json").string());
  FeatureOptions opt;
  opt.reference_time = *parse_http_date("2012-05-04");
  FixturePageSource pages(data("fixtures/pages").string());
  auto outcome = rank_merged(expand_query(classify_query("alcoholism"), kb), merge_dedupe({g, b}), pages,
                             WeightVector{}, opt, kDefaultFetchConcurrency);
  std::ostringstream lines;
  for (const auto& r : outcome.ranked) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", r.score);
    lines << r.final_rank << '\t' << r.canonical_url << '\t' << buf << '\n';
  }
  c.add("golden-order-alcoholism", lines.str() == slurp(data("golden/alcoholism_order.txt")),
        "tests/golden/alcoholism_order.txt");
  return c;
}

Criterion end_to_end_criterion(std::chrono::steady_clock::time_point suite_start) {
  Criterion c{"end-to-end"};
  auto config = load_config(data("fixtures/offline.json"));
  auto golden = slurp(data("golden/search_alcoholism_p1.json"));
  std::string first = to_json(SearchEngine(config).search("alcoholism"));
  std::string second = to_json(SearchEngine(config).search("alcoholism"));
  c.add("golden-json-byte-identical", first == golden && second == golden, "tests/golden/search_alcoholism_p1.json");

  bool empty_query = false;
  try {
    SearchEngine(config).search("   ");
  } catch (const Error& e) {
    empty_query = e.code() == ErrorCode::EmptyQuery;
  }
  c.add("blank-query-error", empty_query, "EmptyQuery");

  auto degraded_cfg = config;
  degraded_cfg.providers[1].endpoint_or_dir = data("fixtures/serps/unavailable").string();
  auto degraded = SearchEngine(degraded_cfg).search("alcoholism");
  c.add("one-provider-down-degrades", !degraded.results.empty() && degraded.degraded == std::vector<std::string>{"bing"},
        std::to_string(degraded.total) + " results, degraded=[" +
            (degraded.degraded.empty() ? "" : degraded.degraded[0]) + "]");

  double elapsed = seconds_since(suite_start);
  c.add("offline-suite-under-30s", elapsed < kSuiteSeconds, num(elapsed) + " s for this acceptance run");
  return c;
}

}  // namespace

int main() {
  auto start = std::chrono::steady_clock::now();
  try {
    report(precision_criterion());
    report(recall_criterion());
    report(pagerank_criterion());
    report(merge_criterion());
    report(ranking_criterion());
    report(end_to_end_criterion(start));
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance aborted: " << e.what() << '\n';
    return 1;
  }
  std::cout << "PASS not-reproducible-at-desk-scale\n"
            << "    user-study ratings and live result counts cannot be re-measured offline; the published counts\n"
            << "    enter only as fixed inputs, and the property and golden-file checks above stand in for them\n";
  std::cout << (unexpected_failures == 0 ? "acceptance: no unexpected failures\n"
                                         : "acceptance: " + std::to_string(unexpected_failures) +
                                               " unexpected failure(s)\n");
  return unexpected_failures == 0 ? 0 : 1;
}
