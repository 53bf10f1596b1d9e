#ifndef COLLAB_ARXIV_HPP_
#define COLLAB_ARXIV_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace collab {

// One bibliographic record: identifier (which encodes the submission
// year/month), subject categories, and the normalized author names.
struct PaperRecord {
  std::string id;
  int year = 0;
  int month = 0;  // 1..12
  std::vector<std::string> categories;
  std::vector<std::string> authors;  // deduped, whitespace-normalized
};

struct ParseStats {
  std::uint64_t lines = 0;
  std::uint64_t parsed = 0;
  std::uint64_t skipped = 0;
};

using RecordSink = std::function<void(const PaperRecord&)>;
// Re-invokable record source; every call replays the full corpus, so
// multi-pass consumers never need to buffer records themselves.
using RecordProvider = std::function<void(const RecordSink&)>;

// (year, month) from an identifier: either old-style archive/YYMMnnn
// (YY >= 91 means 19YY, else 20YY) or new-style YYMM.nnnnn (always 20YY).
std::optional<std::pair<int, int>> id_year_month(const std::string& id);

// Trims and collapses internal whitespace runs to single spaces.
std::string normalize_author(const std::string& raw);

// Streams JSON-lines records into sink.  A line that is not valid JSON,
// lacks a parseable id, or has no authors left after normalization is
// counted as skipped; the stream itself failing mid-read is an error.
ParseStats parse_metadata(std::istream& in, const RecordSink& sink);

// Canonical single-line JSON for a record; parse(to_jsonl(r)) == r.
std::string to_jsonl(const PaperRecord& record);
void write_metadata(const RecordProvider& records, std::ostream& os);

// Provider that reparses `path` on every pass (stats overwritten per pass).
RecordProvider file_provider(std::string path, ParseStats* stats = nullptr);
RecordProvider memory_provider(std::vector<PaperRecord> records);

// Category match for a discipline name: either the category's archive part
// (before '.') equals the name, or the name is `physics`, which stands for
// the physics archives astro-ph, cond-mat, gr-qc, hep-ex, hep-lat, hep-ph,
// hep-th, nucl-ex, nucl-th, physics and quant-ph.
bool category_matches(const std::string& category,
                      const std::string& discipline);

// Keeps records with at least one matching category.
RecordProvider filter_discipline(RecordProvider base, std::string discipline);

// Keeps records with at least one author in `authors`.
RecordProvider filter_authors(RecordProvider base,
                              std::vector<std::string> authors);

// Collaboration indices per calendar year, pooled over all papers of the
// year; the paper size is its author count.  Years inside the corpus span
// with no papers appear with empty index values.
struct YearlyIndicesRow {
  int year = 0;
  std::uint64_t papers = 0;
  std::optional<double> ci, dc, cc;
};

std::vector<YearlyIndicesRow> yearly_indices(const RecordProvider& records);

struct AuthorPapers {
  std::string author;
  std::uint64_t papers = 0;
};

// Authors ranked by paper count, descending; ties broken by name.  When
// the corpus has fewer than `top_k` authors all of them are returned and
// `fewer_than_requested` is set.
struct TopAuthors {
  std::vector<AuthorPapers> ranked;
  bool fewer_than_requested = false;
};

TopAuthors top_productive_authors(const RecordProvider& records,
                                  std::size_t top_k);

// Mean co-author count on an author's k-th paper (chronological order,
// within-month order by id), averaged over the given authors having at
// least k papers.
struct KthPaperPoint {
  std::size_t k = 0;
  double mean_coauthors = 0;
  std::uint64_t authors = 0;  // authors with at least k papers
};

std::vector<KthPaperPoint> coauthors_per_kth_paper(
    const RecordProvider& records, const std::vector<std::string>& authors);

// Pearson correlation, over a seeded sample of authors, between the
// author's count of single-author papers and of k-author papers (total
// author count k) per window of `delta_years` years.  cor[k - 2] holds
// k = 2..5; a window where either count series is constant has no value.
struct CorrelationRow {
  int year = 0;  // window start
  std::array<std::optional<double>, 4> cor;
};

std::vector<CorrelationRow> correlation_series(const RecordProvider& records,
                                               std::size_t sample_size,
                                               int delta_years,
                                               std::uint64_t seed);

// Occupation-ratio estimates of the inclusion law from per-author event
// histories, pooled over ego authors (every corpus author by default).
// For an ego's n-th paper, an alter's class is its count m of joint papers
// with the ego among the first n-1; the numerator counts coauthors with
// m = k.  The k = 0 class size is unobservable, so its denominator uses
// m_cap, the maximum over months of the count of distinct authors writing
// that month; for k >= 1 the denominator counts past coauthors with m = k.
struct EmpiricalFPoint {
  std::size_t n = 0;
  std::uint32_t k = 0;
  double value = 0;  // numerator / denominator; 0 when denominator == 0
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;
};

struct EmpiricalFSeries {
  std::uint64_t m_cap = 0;
  std::vector<EmpiricalFPoint> points;  // ordered by k, then n = 1..
};

EmpiricalFSeries estimate_F_empirical(const RecordProvider& records,
                                      const std::vector<std::uint32_t>& ks,
                                      const std::vector<std::string>& egos = {});

// CSV writers shared by the command-line tool and the golden-file tests.
void write_yearly_indices_csv(const std::vector<YearlyIndicesRow>& rows,
                              std::ostream& os);
void write_top_authors_csv(const TopAuthors& top, std::ostream& os);
void write_kth_paper_csv(const std::vector<KthPaperPoint>& rows,
                         std::ostream& os);
void write_correlation_csv(const std::vector<CorrelationRow>& rows,
                           std::ostream& os);
void write_empirical_f_csv(const EmpiricalFSeries& series, std::ostream& os);

}  // namespace collab

#endif  // COLLAB_ARXIV_HPP_
