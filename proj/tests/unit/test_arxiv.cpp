#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <streambuf>
#include <string>
#include <utility>
#include <vector>

#include <collab/arxiv.hpp>
#include <collab/indices.hpp>
#include <collab/intensity.hpp>
#include <collab/law.hpp>
#include <collab/rng.hpp>
#include <collab/simulation.hpp>

using namespace collab;

namespace {

std::string fixture_path(const std::string& name) {
  return std::string(FIXTURE_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RecordProvider fixture_provider() {
  return file_provider(fixture_path("arxiv_small.jsonl"));
}

PaperRecord make_rec(std::string id, int year, int month,
                     std::vector<std::string> categories,
                     std::vector<std::string> authors) {
  PaperRecord rec;
  rec.id = std::move(id);
  rec.year = year;
  rec.month = month;
  rec.categories = std::move(categories);
  rec.authors = std::move(authors);
  return rec;
}

std::size_t provider_count(const RecordProvider& provider) {
  std::size_t count = 0;
  provider([&](const PaperRecord&) { ++count; });
  return count;
}

}  // namespace

TEST_CASE("identifier encodes the submission year and month") {
  auto ym = id_year_month("0704.0001");
  REQUIRE(ym.has_value());
  CHECK(ym->first == 2007);
  CHECK(ym->second == 4);

  ym = id_year_month("math/0309136");
  REQUIRE(ym.has_value());
  CHECK(ym->first == 2003);
  CHECK(ym->second == 9);

  // Old-style years at or past 91 belong to the 1900s.
  ym = id_year_month("hep-th/9901001");
  REQUIRE(ym.has_value());
  CHECK(ym->first == 1999);
  CHECK(ym->second == 1);
  ym = id_year_month("astro-ph/9108x");
  REQUIRE(ym.has_value());
  CHECK(ym->first == 1991);

  // New-style ids are always 2000s, so 9912 is a valid far-future stamp.
  ym = id_year_month("9912.12345");
  REQUIRE(ym.has_value());
  CHECK(ym->first == 2099);
  CHECK(ym->second == 12);

  CHECK(!id_year_month("").has_value());
  CHECK(!id_year_month("junk").has_value());
  CHECK(!id_year_month("12345").has_value());        // no dot at position 4
  CHECK(!id_year_month("070.12345").has_value());
  CHECK(!id_year_month("0713.00001").has_value());   // month 13
  CHECK(!id_year_month("math/0313001").has_value());
  CHECK(!id_year_month("math/03x9136").has_value());
  CHECK(!id_year_month("math/031").has_value());
}

TEST_CASE("author names are whitespace-normalized") {
  CHECK(normalize_author("Alice Smith") == "Alice Smith");
  CHECK(normalize_author("  Alice   Smith ") == "Alice Smith");
  CHECK(normalize_author("\tAlice\t \nSmith\r") == "Alice Smith");
  CHECK(normalize_author("   ") == "");
  CHECK(normalize_author("") == "");
}

TEST_CASE("metadata parsing accepts both author encodings") {
  std::istringstream in(
      "{\"id\": \"0704.0042\", \"categories\": \"cs.DS cs.LG\","
      " \"authors\": \"Ann One, Ben Two and Cal Three\"}\n"
      "{\"id\": \"math/9911003\", \"categories\": \"math.PR\","
      " \"authors_parsed\": [[\"Smith\", \"Alice\", \"\"], [\"Doe\", \"Jo\", \"Jr\"]]}\n"
      "not json at all\n"
      "{\"id\": \"0704.0043\", \"categories\": \"cs.DS\", \"authors\": \" , \"}\n"
      "{\"id\": \"nonsense\", \"categories\": \"cs.DS\", \"authors\": \"Ann One\"}\n"
      "{\"id\": \"0704.0044\", \"authors\": \"Ann One\"}\n"
      "{\"id\": \"0704.0045\", \"categories\": [\"q-bio.PE\", \"q-bio.PE\", \"math.PR\"],"
      " \"authors\": \"Dee  Four, Dee Four\"}\n");
  std::vector<PaperRecord> records;
  ParseStats stats =
      parse_metadata(in, [&](const PaperRecord& rec) { records.push_back(rec); });
  CHECK(stats.lines == 7);
  CHECK(stats.parsed == 3);
  CHECK(stats.skipped == 4);
  REQUIRE(records.size() == 3);

  CHECK(records[0].year == 2007);
  CHECK(records[0].month == 4);
  CHECK(records[0].categories == std::vector<std::string>{"cs.DS", "cs.LG"});
  CHECK(records[0].authors ==
        std::vector<std::string>{"Ann One", "Ben Two", "Cal Three"});

  // [last, first, suffix] rebuilds as "First suffix Last" words joined by
  // single spaces, with empty parts collapsing away.
  CHECK(records[1].year == 1999);
  CHECK(records[1].month == 11);
  CHECK(records[1].authors ==
        std::vector<std::string>{"Alice Smith", "Jo Jr Doe"});

  // Duplicate categories and authors collapse, keeping first positions.
  CHECK(records[2].categories ==
        std::vector<std::string>{"q-bio.PE", "math.PR"});
  CHECK(records[2].authors == std::vector<std::string>{"Dee Four"});
}

TEST_CASE("canonical record lines round-trip") {
  PaperRecord rec = make_rec("0712.0006", 2007, 12,
                             {"quant-ph", "physics.optics"},
                             {"Alice Smith", "Bob Jones"});
  std::string line = to_jsonl(rec);
  std::istringstream in(line);
  std::vector<PaperRecord> parsed;
  ParseStats stats =
      parse_metadata(in, [&](const PaperRecord& r) { parsed.push_back(r); });
  CHECK(stats.parsed == 1);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].id == rec.id);
  CHECK(parsed[0].year == rec.year);
  CHECK(parsed[0].month == rec.month);
  CHECK(parsed[0].categories == rec.categories);
  CHECK(parsed[0].authors == rec.authors);

  std::ostringstream os;
  write_metadata(memory_provider({rec, rec}), os);
  std::string text = os.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("category matching uses the archive part of a category") {
  CHECK(category_matches("math.CO", "math"));
  CHECK(category_matches("math", "math"));
  CHECK(category_matches("cs.LG", "cs"));
  CHECK(!category_matches("math.CO", "cs"));
  CHECK(!category_matches("mathematics.CO", "math"));

  // `physics` bundles the physics archives.
  for (const std::string cat :
       {"astro-ph", "cond-mat.str-el", "gr-qc", "hep-ex", "hep-lat",
        "hep-ph", "hep-th", "nucl-ex", "nucl-th", "physics.optics",
        "quant-ph"})
    CHECK(category_matches(cat, "physics"));
  CHECK(!category_matches("math-ph", "physics"));
  CHECK(!category_matches("nlin.CD", "physics"));
  CHECK(!category_matches("cs.LG", "physics"));
}

TEST_CASE("fixture corpus loads and filters by discipline and author") {
  ParseStats stats;
  RecordProvider provider =
      file_provider(fixture_path("arxiv_small.jsonl"), &stats);
  CHECK(provider_count(provider) == 10);
  CHECK(stats.lines == 10);
  CHECK(stats.parsed == 10);
  CHECK(stats.skipped == 0);
  // Providers replay on every pass.
  CHECK(provider_count(provider) == 10);

  CHECK(provider_count(filter_discipline(provider, "math")) == 5);
  CHECK(provider_count(filter_discipline(provider, "cs")) == 4);
  CHECK(provider_count(filter_discipline(provider, "physics")) == 2);
  CHECK(provider_count(filter_discipline(provider, "q-bio")) == 0);
  CHECK(provider_count(filter_authors(provider, {"Eve Green"})) == 4);
  CHECK(provider_count(filter_authors(provider, {"Nobody"})) == 0);

  CHECK_THROWS_WITH_AS(provider_count(file_provider(fixture_path("absent.jsonl"))),
                       doctest::Contains("cannot open"), std::runtime_error);
}

TEST_CASE("yearly indices over the fixture corpus") {
  std::vector<YearlyIndicesRow> rows = yearly_indices(fixture_provider());
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].year == 2003);
  CHECK(rows[0].papers == 4);
  CHECK(*rows[0].ci == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*rows[0].dc == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(*rows[0].cc == doctest::Approx(5.0 / 12.0).epsilon(1e-12));
  for (std::size_t i = 1; i <= 3; ++i) {
    CHECK(rows[i].papers == 0);
    CHECK(!rows[i].ci.has_value());
    CHECK(!rows[i].dc.has_value());
    CHECK(!rows[i].cc.has_value());
  }
  CHECK(rows[4].year == 2007);
  CHECK(rows[4].papers == 6);
  CHECK(*rows[4].ci == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*rows[4].dc == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(*rows[4].cc == doctest::Approx(23.0 / 72.0).epsilon(1e-12));

  std::ostringstream os;
  write_yearly_indices_csv(rows, os);
  CHECK(os.str() == slurp(fixture_path("golden/yearly_indices.csv")));

  CHECK(yearly_indices(memory_provider({})).empty());
}

TEST_CASE("top productive authors and the filtered index series") {
  TopAuthors top = top_productive_authors(fixture_provider(), 3);
  CHECK(!top.fewer_than_requested);
  REQUIRE(top.ranked.size() == 3);
  CHECK(top.ranked[0].author == "Alice Smith");
  CHECK(top.ranked[0].papers == 5);
  CHECK(top.ranked[1].author == "Eve Green");
  CHECK(top.ranked[1].papers == 4);
  CHECK(top.ranked[2].author == "Bob Jones");
  CHECK(top.ranked[2].papers == 3);

  std::ostringstream os;
  write_top_authors_csv(top, os);
  CHECK(os.str() == slurp(fixture_path("golden/top_authors.csv")));

  // Ties broken by name: Frank Fox (2) then the single-paper authors.
  TopAuthors five = top_productive_authors(fixture_provider(), 5);
  REQUIRE(five.ranked.size() == 5);
  CHECK(five.ranked[3].author == "Frank Fox");
  CHECK(five.ranked[4].author == "Carol Chen");

  TopAuthors all = top_productive_authors(fixture_provider(), 100);
  CHECK(all.fewer_than_requested);
  CHECK(all.ranked.size() == 10);

  CHECK_THROWS_AS(top_productive_authors(fixture_provider(), 0),
                  std::invalid_argument);

  std::vector<std::string> names;
  for (const auto& ap : top.ranked) names.push_back(ap.author);
  std::vector<YearlyIndicesRow> rows =
      yearly_indices(filter_authors(fixture_provider(), names));
  std::ostringstream filtered;
  write_yearly_indices_csv(rows, filtered);
  CHECK(filtered.str() == slurp(fixture_path("golden/yearly_indices_top.csv")));
}

TEST_CASE("mean coauthors on the k-th paper") {
  // Two tracked authors: histories [0, 2] and [2] coauthors.
  std::vector<PaperRecord> papers = {
      make_rec("0101.00001", 2001, 1, {"math.CO"}, {"X"}),
      make_rec("0102.00001", 2001, 2, {"math.CO"}, {"X", "Z", "W"}),
      make_rec("0103.00001", 2001, 3, {"math.CO"}, {"Y", "U", "V"}),
  };
  std::vector<KthPaperPoint> points =
      coauthors_per_kth_paper(memory_provider(papers), {"X", "Y"});
  REQUIRE(points.size() == 2);
  CHECK(points[0].k == 1);
  CHECK(points[0].mean_coauthors == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(points[0].authors == 2);
  CHECK(points[1].k == 2);
  CHECK(points[1].mean_coauthors == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(points[1].authors == 1);

  // Within a month the identifier orders the history.
  std::vector<PaperRecord> same_month = {
      make_rec("0503.00002", 2005, 3, {"math.CO"}, {"X", "A", "B"}),
      make_rec("0503.00001", 2005, 3, {"math.CO"}, {"X"}),
  };
  std::vector<KthPaperPoint> ordered =
      coauthors_per_kth_paper(memory_provider(same_month), {"X"});
  REQUIRE(ordered.size() == 2);
  CHECK(ordered[0].mean_coauthors == doctest::Approx(0.0));
  CHECK(ordered[1].mean_coauthors == doctest::Approx(2.0));

  // Requested names are normalized before matching.
  std::vector<KthPaperPoint> spaced =
      coauthors_per_kth_paper(memory_provider(papers), {"  X "});
  CHECK(spaced.size() == 2);

  CHECK_THROWS_AS(coauthors_per_kth_paper(memory_provider(papers), {}),
                  std::invalid_argument);

  std::ostringstream os;
  TopAuthors top = top_productive_authors(fixture_provider(), 3);
  std::vector<std::string> names;
  for (const auto& ap : top.ranked) names.push_back(ap.author);
  write_kth_paper_csv(coauthors_per_kth_paper(fixture_provider(), names), os);
  CHECK(os.str() == slurp(fixture_path("golden/kth_paper.csv")));
}

TEST_CASE("correlation series over the fixture corpus") {
  std::vector<CorrelationRow> rows =
      correlation_series(fixture_provider(), 1000, 1, 42);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].year == 2003);
  REQUIRE(rows[0].cor[0].has_value());
  CHECK(*rows[0].cor[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  REQUIRE(rows[0].cor[1].has_value());
  CHECK(*rows[0].cor[1] == doctest::Approx(-0.218217890236).epsilon(1e-9));
  CHECK(!rows[0].cor[2].has_value());
  CHECK(!rows[0].cor[3].has_value());
  for (std::size_t b = 1; b <= 3; ++b)
    for (const auto& c : rows[b].cor) CHECK(!c.has_value());
  CHECK(rows[4].year == 2007);
  CHECK(*rows[4].cor[0] == doctest::Approx(0.54660816661).epsilon(1e-9));
  CHECK(*rows[4].cor[1] == doctest::Approx(0.715678085421).epsilon(1e-9));
  CHECK(*rows[4].cor[2] == doctest::Approx(-0.382546027838).epsilon(1e-9));
  CHECK(!rows[4].cor[3].has_value());

  // The sample covers the whole author pool, so the seed cannot matter.
  std::ostringstream os;
  write_correlation_csv(rows, os);
  CHECK(os.str() == slurp(fixture_path("golden/correlations.csv")));
  std::ostringstream reseeded;
  write_correlation_csv(correlation_series(fixture_provider(), 1000, 1, 7),
                        reseeded);
  CHECK(reseeded.str() == os.str());

  // One pooled decade-wide window.
  std::vector<CorrelationRow> pooled =
      correlation_series(fixture_provider(), 1000, 10, 42);
  REQUIRE(pooled.size() == 1);
  CHECK(pooled[0].year == 2003);

  CHECK_THROWS_AS(correlation_series(fixture_provider(), 1, 1, 42),
                  std::invalid_argument);
  CHECK_THROWS_AS(correlation_series(fixture_provider(), 1000, 0, 42),
                  std::invalid_argument);
  CHECK(correlation_series(memory_provider({}), 1000, 1, 42).empty());
}

TEST_CASE("correlations vanish when paper sizes are independent") {
  // 402 authors; solo counts and pair/triple memberships drawn
  // independently, so single-paper counts carry no information about
  // larger papers.
  const std::size_t num_authors = 402;
  Rng rng(20240817);
  std::vector<PaperRecord> papers;
  int serial = 0;
  auto add_paper = [&](std::vector<std::string> authors) {
    int year = 2000 + serial % 5;
    int month = 1 + serial % 12;
    char id[32];
    std::snprintf(id, sizeof id, "c%06d", serial);
    papers.push_back(make_rec(id, year, month, {"math.CO"},
                              std::move(authors)));
    ++serial;
  };
  auto author_name = [](std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "ego_%03zu", i);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < num_authors; ++i) {
    std::size_t solos = 1 + static_cast<std::size_t>(rng.below(2));
    for (std::size_t s = 0; s < solos; ++s) add_paper({author_name(i)});
  }
  for (std::size_t p = 0; p + 1 < num_authors; p += 2)
    if (rng.below(2) == 1) add_paper({author_name(p), author_name(p + 1)});
  for (std::size_t q = 0; q + 2 < num_authors; q += 3)
    if (rng.below(2) == 1)
      add_paper({author_name(q), author_name(q + 1), author_name(q + 2)});

  std::vector<CorrelationRow> rows =
      correlation_series(memory_provider(papers), 500, 10, 5);
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].cor[0].has_value());
  REQUIRE(rows[0].cor[1].has_value());
  CHECK(std::abs(*rows[0].cor[0]) < 0.2);
  CHECK(std::abs(*rows[0].cor[1]) < 0.2);
  CHECK(!rows[0].cor[2].has_value());
  CHECK(!rows[0].cor[3].has_value());
}

TEST_CASE("empirical inclusion-law estimates over the fixture corpus") {
  EmpiricalFSeries series =
      estimate_F_empirical(fixture_provider(), {0, 1, 2, 3});
  CHECK(series.m_cap == 4);
  std::ostringstream os;
  write_empirical_f_csv(series, os);
  CHECK(os.str() == slurp(fixture_path("golden/f_hat.csv")));

  // Single-ego variant follows one author's history.
  EmpiricalFSeries alice =
      estimate_F_empirical(fixture_provider(), {0, 1}, {"Alice Smith"});
  CHECK(alice.m_cap == 4);
  REQUIRE(alice.points.size() == 10);
  const double k0_values[] = {0.0, 0.25, 0.0, 0.5, 0.0};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(alice.points[i].n == i + 1);
    CHECK(alice.points[i].k == 0);
    CHECK(alice.points[i].denominator == 4);
    CHECK(alice.points[i].value ==
          doctest::Approx(k0_values[i]).epsilon(1e-12));
  }
  const std::uint64_t k1_nums[] = {0, 0, 1, 0, 0};
  const std::uint64_t k1_dens[] = {0, 0, 1, 0, 2};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(alice.points[5 + i].k == 1);
    CHECK(alice.points[5 + i].numerator == k1_nums[i]);
    CHECK(alice.points[5 + i].denominator == k1_dens[i]);
  }
  CHECK(alice.points[7].value == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(estimate_F_empirical(fixture_provider(), {}),
                  std::invalid_argument);
}

namespace {

// Streambuf that synthesizes one metadata line per refill, so arbitrarily
// long corpora stream through without ever materializing.
class GeneratedCorpus : public std::streambuf {
 public:
  explicit GeneratedCorpus(std::uint64_t lines) : remaining_(lines) {}

 protected:
  int_type underflow() override {
    if (remaining_ == 0) return traits_type::eof();
    --remaining_;
    unsigned long long i = next_++;
    char buf[160];
    int len;
    if (i % 97 == 0) {
      len = std::snprintf(buf, sizeof buf, "corrupt line %llu\n", i);
    } else {
      len = std::snprintf(
          buf, sizeof buf,
          "{\"id\": \"07%02llu.%05llu\", \"categories\": \"math.CO\","
          " \"authors\": \"A%llu B, C%llu D\"}\n",
          1 + i % 12, i % 100000, i % 50000, i % 50000);
    }
    line_.assign(buf, static_cast<std::size_t>(len));
    setg(line_.data(), line_.data(), line_.data() + line_.size());
    return traits_type::to_int_type(line_[0]);
  }

 private:
  std::uint64_t remaining_;
  unsigned long long next_ = 0;
  std::string line_;
};

}  // namespace

TEST_CASE("a million metadata lines stream through the parser") {
  const std::uint64_t total = 1000000;
  GeneratedCorpus corpus(total);
  std::istream in(&corpus);
  std::uint64_t authors = 0;
  ParseStats stats = parse_metadata(
      in, [&](const PaperRecord& rec) { authors += rec.authors.size(); });
  CHECK(stats.lines == total);
  CHECK(stats.skipped == 10310);
  CHECK(stats.parsed == total - 10310);
  CHECK(authors == 2 * (total - 10310));
}

TEST_CASE("simulated runs summarize identically through the record pipeline") {
  auto law = CoauthorshipLaw::constant(0.12);
  auto intensity = IntensityFunction::constant(0.6);
  const std::uint32_t num_authors = 25;
  const double year_length = 12.0;
  const std::size_t num_years = 10;
  Rng rng(87001);
  EventTimeline timeline =
      sample_event_times(intensity, year_length * num_years, rng);
  SimulationRun run =
      simulate_coauthor_sets(law, num_authors, timeline.times.size(), rng);
  attach_event_times(run, timeline);
  REQUIRE(run.num_events() > 0);

  std::vector<PaperRecord> records;
  for (std::size_t e = 0; e < run.num_events(); ++e) {
    double t = run.event_times[e];
    int year = 1991 + static_cast<int>(t / 12.0);
    int month = 1 + static_cast<int>(t) % 12;
    char id[24];
    std::snprintf(id, sizeof id, "sim/%02d%02d%03zu", year % 100, month,
                  e % 1000);
    std::vector<std::string> authors = {"ego"};
    for (std::uint32_t a : run.coauthor_sets[e])
      authors.push_back("a" + std::to_string(a));
    records.push_back(make_rec(id, year, month, {"math.CO"},
                               std::move(authors)));
  }

  std::vector<YearlyIndicesRow> by_record =
      yearly_indices(memory_provider(records));
  auto ci = yearly_index_series(run, PhiFunction::ci(), year_length, num_years);
  auto dc = yearly_index_series(run, PhiFunction::dc(), year_length, num_years);
  auto cc = yearly_index_series(run, PhiFunction::cc(), year_length, num_years);
  REQUIRE(ci.size() == num_years);

  std::vector<bool> covered(num_years, false);
  for (const auto& row : by_record) {
    auto j = static_cast<std::size_t>(row.year - 1991);
    REQUIRE(j < num_years);
    covered[j] = true;
    CHECK(row.papers == ci[j].papers);
    REQUIRE(row.ci.has_value() == ci[j].value.has_value());
    REQUIRE(row.dc.has_value() == dc[j].value.has_value());
    REQUIRE(row.cc.has_value() == cc[j].value.has_value());
    if (row.ci) CHECK(*row.ci == *ci[j].value);
    if (row.dc) CHECK(*row.dc == *dc[j].value);
    if (row.cc) CHECK(*row.cc == *cc[j].value);
  }
  // Years outside the record span hold no papers in the run either.
  for (std::size_t j = 0; j < num_years; ++j)
    if (!covered[j]) CHECK(ci[j].papers == 0);
}
