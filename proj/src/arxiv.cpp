#include "collab/arxiv.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include <json.hpp>

#include "collab/config.hpp"
#include "collab/csv.hpp"
#include "collab/indices.hpp"
#include "collab/rng.hpp"

namespace collab {

namespace {

using nlohmann::json;

bool all_digits(const std::string& s, std::size_t pos, std::size_t count) {
  if (pos + count > s.size()) return false;
  for (std::size_t i = pos; i < pos + count; ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

std::optional<std::pair<int, int>> parse_yymm(const std::string& s,
                                              std::size_t pos, bool old_style) {
  if (!all_digits(s, pos, 4)) return std::nullopt;
  int yy = (s[pos] - '0') * 10 + (s[pos + 1] - '0');
  int mm = (s[pos + 2] - '0') * 10 + (s[pos + 3] - '0');
  if (mm < 1 || mm > 12) return std::nullopt;
  int year = (old_style && yy >= 91) ? 1900 + yy : 2000 + yy;
  return std::make_pair(year, mm);
}

// Interned author names: dense ids for per-author state.
struct AuthorTable {
  std::unordered_map<std::string, std::uint32_t> ids;
  std::vector<std::string> names;

  std::uint32_t intern(const std::string& name) {
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    auto id = static_cast<std::uint32_t>(names.size());
    ids.emplace(name, id);
    names.push_back(name);
    return id;
  }
  std::optional<std::uint32_t> find(const std::string& name) const {
    auto it = ids.find(name);
    if (it == ids.end()) return std::nullopt;
    return it->second;
  }
};

std::optional<double> pearson(const std::vector<double>& x,
                              const std::vector<double>& y) {
  std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0 || syy <= 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

bool parse_record_json(const std::string& line, PaperRecord& rec) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object()) return false;

  auto id_it = j.find("id");
  if (id_it == j.end() || !id_it->is_string()) return false;
  rec.id = id_it->get<std::string>();
  auto ym = id_year_month(rec.id);
  if (!ym) return false;
  rec.year = ym->first;
  rec.month = ym->second;

  rec.categories.clear();
  auto cat_it = j.find("categories");
  if (cat_it == j.end()) return false;
  std::vector<std::string> cats;
  if (cat_it->is_string()) {
    cats = split_tokens(cat_it->get<std::string>());
  } else if (cat_it->is_array()) {
    for (const auto& c : *cat_it) {
      if (!c.is_string()) return false;
      cats.push_back(c.get<std::string>());
    }
  } else {
    return false;
  }
  std::unordered_set<std::string> seen_cat;
  for (auto& c : cats)
    if (seen_cat.insert(c).second) rec.categories.push_back(std::move(c));

  rec.authors.clear();
  std::vector<std::string> raw_names;
  auto parsed_it = j.find("authors_parsed");
  if (parsed_it != j.end() && parsed_it->is_array()) {
    // Elements are [last, first, suffix...]; rebuilt as "First Last suffix".
    for (const auto& entry : *parsed_it) {
      if (!entry.is_array() || entry.empty()) return false;
      std::string name;
      for (std::size_t i = 1; i < entry.size(); ++i) {
        if (!entry[i].is_string()) return false;
        name += entry[i].get<std::string>();
        name += ' ';
      }
      if (!entry[0].is_string()) return false;
      name += entry[0].get<std::string>();
      raw_names.push_back(std::move(name));
    }
  } else {
    auto auth_it = j.find("authors");
    if (auth_it == j.end() || !auth_it->is_string()) return false;
    std::string s = auth_it->get<std::string>();
    // Separator conventions of the flat field: commas and " and ".
    std::string cur;
    for (std::size_t i = 0; i < s.size();) {
      if (s[i] == ',') {
        raw_names.push_back(cur);
        cur.clear();
        ++i;
      } else if (s.compare(i, 5, " and ") == 0) {
        raw_names.push_back(cur);
        cur.clear();
        i += 5;
      } else {
        cur += s[i];
        ++i;
      }
    }
    raw_names.push_back(cur);
  }
  std::unordered_set<std::string> seen_author;
  for (const auto& raw : raw_names) {
    std::string name = normalize_author(raw);
    if (name.empty()) continue;
    if (seen_author.insert(name).second) rec.authors.push_back(std::move(name));
  }
  return !rec.authors.empty();
}

}  // namespace

std::optional<std::pair<int, int>> id_year_month(const std::string& id) {
  auto slash = id.find('/');
  if (slash != std::string::npos)
    return parse_yymm(id, slash + 1, /*old_style=*/true);
  auto dot = id.find('.');
  if (dot != 4) return std::nullopt;
  return parse_yymm(id, 0, /*old_style=*/false);
}

std::string normalize_author(const std::string& raw) {
  std::string out;
  bool pending_space = false;
  for (char c : raw) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += c;
  }
  return out;
}

ParseStats parse_metadata(std::istream& in, const RecordSink& sink) {
  ParseStats stats;
  std::string line;
  PaperRecord rec;
  while (std::getline(in, line)) {
    ++stats.lines;
    if (parse_record_json(line, rec)) {
      ++stats.parsed;
      sink(rec);
    } else {
      ++stats.skipped;
    }
  }
  if (in.bad()) throw std::runtime_error("metadata stream: read failure");
  return stats;
}

std::string to_jsonl(const PaperRecord& record) {
  std::string cats;
  for (std::size_t i = 0; i < record.categories.size(); ++i) {
    if (i) cats += ' ';
    cats += record.categories[i];
  }
  std::string authors;
  for (std::size_t i = 0; i < record.authors.size(); ++i) {
    if (i) authors += ", ";
    authors += record.authors[i];
  }
  json j;
  j["id"] = record.id;
  j["categories"] = cats;
  j["authors"] = authors;
  return j.dump();
}

void write_metadata(const RecordProvider& records, std::ostream& os) {
  records([&](const PaperRecord& rec) { os << to_jsonl(rec) << '\n'; });
}

RecordProvider file_provider(std::string path, ParseStats* stats) {
  return [path = std::move(path), stats](const RecordSink& sink) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open metadata file: " + path);
    ParseStats s = parse_metadata(in, sink);
    if (stats) *stats = s;
  };
}

RecordProvider memory_provider(std::vector<PaperRecord> records) {
  auto shared = std::make_shared<std::vector<PaperRecord>>(std::move(records));
  return [shared](const RecordSink& sink) {
    for (const auto& rec : *shared) sink(rec);
  };
}

bool category_matches(const std::string& category,
                      const std::string& discipline) {
  static const std::unordered_set<std::string> kPhysicsArchives = {
      "astro-ph", "cond-mat", "gr-qc",   "hep-ex",  "hep-lat", "hep-ph",
      "hep-th",   "nucl-ex",  "nucl-th", "physics", "quant-ph"};
  std::string archive = category.substr(0, category.find('.'));
  if (archive == discipline) return true;
  return discipline == "physics" && kPhysicsArchives.count(archive) > 0;
}

RecordProvider filter_discipline(RecordProvider base, std::string discipline) {
  return [base = std::move(base),
          discipline = std::move(discipline)](const RecordSink& sink) {
    base([&](const PaperRecord& rec) {
      for (const auto& cat : rec.categories) {
        if (category_matches(cat, discipline)) {
          sink(rec);
          return;
        }
      }
    });
  };
}

RecordProvider filter_authors(RecordProvider base,
                              std::vector<std::string> authors) {
  auto keep = std::make_shared<std::unordered_set<std::string>>(
      authors.begin(), authors.end());
  return [base = std::move(base), keep](const RecordSink& sink) {
    base([&](const PaperRecord& rec) {
      for (const auto& a : rec.authors) {
        if (keep->count(a)) {
          sink(rec);
          return;
        }
      }
    });
  };
}

std::vector<YearlyIndicesRow> yearly_indices(const RecordProvider& records) {
  std::map<int, WindowCounts> by_year;
  records([&](const PaperRecord& rec) {
    auto& counts = by_year[rec.year];
    counts.by_size[static_cast<std::uint32_t>(rec.authors.size())] += 1;
    counts.total += 1;
  });
  std::vector<YearlyIndicesRow> rows;
  if (by_year.empty()) return rows;
  int first = by_year.begin()->first;
  int last = by_year.rbegin()->first;
  for (int y = first; y <= last; ++y) {
    YearlyIndicesRow row;
    row.year = y;
    auto it = by_year.find(y);
    if (it != by_year.end()) {
      row.papers = it->second.total;
      row.ci = index_value(it->second, PhiFunction::ci());
      row.dc = index_value(it->second, PhiFunction::dc());
      row.cc = index_value(it->second, PhiFunction::cc());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

TopAuthors top_productive_authors(const RecordProvider& records,
                                  std::size_t top_k) {
  if (top_k == 0) throw std::invalid_argument("top_k must be at least 1");
  std::unordered_map<std::string, std::uint64_t> counts;
  records([&](const PaperRecord& rec) {
    for (const auto& a : rec.authors) counts[a] += 1;
  });
  std::vector<AuthorPapers> ranked;
  ranked.reserve(counts.size());
  for (auto& [name, papers] : counts) ranked.push_back({name, papers});
  std::sort(ranked.begin(), ranked.end(),
            [](const AuthorPapers& lhs, const AuthorPapers& rhs) {
              if (lhs.papers != rhs.papers) return lhs.papers > rhs.papers;
              return lhs.author < rhs.author;
            });
  TopAuthors top;
  top.fewer_than_requested = ranked.size() < top_k;
  if (ranked.size() > top_k) ranked.resize(top_k);
  top.ranked = std::move(ranked);
  return top;
}

std::vector<KthPaperPoint> coauthors_per_kth_paper(
    const RecordProvider& records, const std::vector<std::string>& authors) {
  if (authors.empty())
    throw std::invalid_argument("coauthors_per_kth_paper: empty author set");
  struct Entry {
    int ym;
    std::string id;
    std::uint32_t coauthors;
  };
  std::unordered_map<std::string, std::vector<Entry>> history;
  for (const auto& a : authors) history.emplace(normalize_author(a),
                                                std::vector<Entry>{});
  records([&](const PaperRecord& rec) {
    for (const auto& a : rec.authors) {
      auto it = history.find(a);
      if (it == history.end()) continue;
      it->second.push_back(
          {rec.year * 12 + rec.month, rec.id,
           static_cast<std::uint32_t>(rec.authors.size() - 1)});
    }
  });
  std::size_t longest = 0;
  for (auto& [name, entries] : history) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& lhs, const Entry& rhs) {
                if (lhs.ym != rhs.ym) return lhs.ym < rhs.ym;
                return lhs.id < rhs.id;
              });
    longest = std::max(longest, entries.size());
  }
  std::vector<KthPaperPoint> rows;
  for (std::size_t k = 1; k <= longest; ++k) {
    KthPaperPoint row;
    row.k = k;
    double sum = 0;
    for (const auto& [name, entries] : history) {
      if (entries.size() < k) continue;
      sum += entries[k - 1].coauthors;
      ++row.authors;
    }
    row.mean_coauthors = sum / static_cast<double>(row.authors);
    rows.push_back(row);
  }
  return rows;
}

std::vector<CorrelationRow> correlation_series(const RecordProvider& records,
                                               std::size_t sample_size,
                                               int delta_years,
                                               std::uint64_t seed) {
  if (sample_size < 2)
    throw std::invalid_argument("correlation_series: sample_size < 2");
  if (delta_years < 1)
    throw std::invalid_argument("correlation_series: delta_years < 1");

  std::set<std::string> author_set;
  int first_year = 0, last_year = 0;
  bool any = false;
  records([&](const PaperRecord& rec) {
    for (const auto& a : rec.authors) author_set.insert(a);
    if (!any) {
      first_year = last_year = rec.year;
      any = true;
    } else {
      first_year = std::min(first_year, rec.year);
      last_year = std::max(last_year, rec.year);
    }
  });
  if (!any) return {};

  std::vector<std::string> pool(author_set.begin(), author_set.end());
  std::size_t take = std::min(sample_size, pool.size());
  Rng rng(seed);
  for (std::size_t i = 0; i < take; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(
                            static_cast<std::uint64_t>(pool.size() - i)));
    std::swap(pool[i], pool[j]);
  }
  std::unordered_map<std::string, std::size_t> sampled;
  for (std::size_t i = 0; i < take; ++i) sampled.emplace(pool[i], i);

  auto buckets = static_cast<std::size_t>(
      (last_year - first_year) / delta_years + 1);
  // counts[(author, bucket)][size - 1] for paper sizes 1..5
  std::vector<std::array<std::uint32_t, 5>> counts(take * buckets,
                                                   std::array<std::uint32_t, 5>{});
  records([&](const PaperRecord& rec) {
    std::size_t size = rec.authors.size();
    if (size > 5) return;
    auto bucket = static_cast<std::size_t>((rec.year - first_year) /
                                           delta_years);
    for (const auto& a : rec.authors) {
      auto it = sampled.find(a);
      if (it == sampled.end()) continue;
      counts[it->second * buckets + bucket][size - 1] += 1;
    }
  });

  std::vector<CorrelationRow> rows(buckets);
  std::vector<double> x1(take);
  std::vector<double> xk(take);
  for (std::size_t b = 0; b < buckets; ++b) {
    rows[b].year = first_year + static_cast<int>(b) * delta_years;
    for (std::size_t i = 0; i < take; ++i)
      x1[i] = counts[i * buckets + b][0];
    for (std::uint32_t k = 2; k <= 5; ++k) {
      for (std::size_t i = 0; i < take; ++i)
        xk[i] = counts[i * buckets + b][k - 1];
      rows[b].cor[k - 2] = pearson(x1, xk);
    }
  }
  return rows;
}

EmpiricalFSeries estimate_F_empirical(const RecordProvider& records,
                                      const std::vector<std::uint32_t>& ks,
                                      const std::vector<std::string>& egos) {
  if (ks.empty())
    throw std::invalid_argument("estimate_F_empirical: no k values");

  struct Event {
    int ym;
    std::string id;
    std::vector<std::uint32_t> authors;
  };
  AuthorTable table;
  std::vector<Event> events;
  std::unordered_map<int, std::unordered_set<std::uint32_t>> monthly;
  records([&](const PaperRecord& rec) {
    Event ev;
    ev.ym = rec.year * 12 + rec.month;
    ev.id = rec.id;
    ev.authors.reserve(rec.authors.size());
    for (const auto& a : rec.authors) ev.authors.push_back(table.intern(a));
    auto& month_set = monthly[ev.ym];
    for (auto id : ev.authors) month_set.insert(id);
    events.push_back(std::move(ev));
  });
  std::uint64_t m_cap = 0;
  for (const auto& [ym, set] : monthly)
    m_cap = std::max<std::uint64_t>(m_cap, set.size());
  monthly.clear();
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.ym != b.ym) return a.ym < b.ym;
    return a.id < b.id;
  });

  std::size_t num_authors = table.names.size();
  std::vector<std::uint8_t> is_ego(num_authors, egos.empty() ? 1 : 0);
  if (!egos.empty()) {
    for (const auto& name : egos) {
      auto id = table.find(normalize_author(name));
      if (id) is_ego[*id] = 1;
    }
  }

  // Per ego: papers so far, joint counts per alter, alter tally per count.
  std::vector<std::size_t> n_count(num_authors, 0);
  std::vector<std::unordered_map<std::uint32_t, std::uint32_t>> joint(
      num_authors);
  std::vector<std::unordered_map<std::uint32_t, std::uint64_t>> tally(
      num_authors);

  struct Accum {
    std::vector<std::uint64_t> num, den;
  };
  std::vector<Accum> acc(ks.size());
  auto bump = [](std::vector<std::uint64_t>& v, std::size_t n,
                 std::uint64_t add) {
    if (v.size() < n) v.resize(n, 0);
    v[n - 1] += add;
  };

  std::size_t max_n = 0;
  for (const auto& ev : events) {
    for (auto ego : ev.authors) {
      if (!is_ego[ego]) continue;
      std::size_t n = n_count[ego] + 1;
      max_n = std::max(max_n, n);
      for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        std::uint32_t k = ks[ki];
        std::uint64_t joined = 0;
        for (auto alter : ev.authors) {
          if (alter == ego) continue;
          auto it = joint[ego].find(alter);
          std::uint32_t m = it == joint[ego].end() ? 0 : it->second;
          if (m == k) ++joined;
        }
        std::uint64_t at_risk;
        if (k == 0) {
          at_risk = m_cap;
        } else {
          auto it = tally[ego].find(k);
          at_risk = it == tally[ego].end() ? 0 : it->second;
        }
        bump(acc[ki].num, n, joined);
        bump(acc[ki].den, n, at_risk);
      }
    }
    for (auto ego : ev.authors) {
      if (!is_ego[ego]) continue;
      for (auto alter : ev.authors) {
        if (alter == ego) continue;
        std::uint32_t m = joint[ego][alter]++;
        if (m >= 1) {
          auto it = tally[ego].find(m);
          if (it != tally[ego].end() && --it->second == 0)
            tally[ego].erase(it);
        }
        tally[ego][m + 1] += 1;
      }
      n_count[ego] += 1;
    }
  }

  EmpiricalFSeries series;
  series.m_cap = m_cap;
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    for (std::size_t n = 1; n <= max_n; ++n) {
      EmpiricalFPoint pt;
      pt.n = n;
      pt.k = ks[ki];
      pt.numerator = n <= acc[ki].num.size() ? acc[ki].num[n - 1] : 0;
      pt.denominator = n <= acc[ki].den.size() ? acc[ki].den[n - 1] : 0;
      pt.value = pt.denominator == 0
                     ? 0.0
                     : static_cast<double>(pt.numerator) /
                           static_cast<double>(pt.denominator);
      series.points.push_back(pt);
    }
  }
  return series;
}

void write_yearly_indices_csv(const std::vector<YearlyIndicesRow>& rows,
                              std::ostream& os) {
  write_csv_row(os, {"year", "papers", "ci", "dc", "cc"});
  for (const auto& row : rows)
    write_csv_row(os, {format_number(row.year),
                       format_number(static_cast<double>(row.papers)),
                       csv_cell(row.ci), csv_cell(row.dc), csv_cell(row.cc)});
}

void write_top_authors_csv(const TopAuthors& top, std::ostream& os) {
  write_csv_row(os, {"author", "papers"});
  for (const auto& row : top.ranked)
    write_csv_row(os, {csv_text(row.author),
                       format_number(static_cast<double>(row.papers))});
}

void write_kth_paper_csv(const std::vector<KthPaperPoint>& rows,
                         std::ostream& os) {
  write_csv_row(os, {"k", "mean_coauthors", "authors"});
  for (const auto& row : rows)
    write_csv_row(os, {format_number(static_cast<double>(row.k)),
                       format_number(row.mean_coauthors),
                       format_number(static_cast<double>(row.authors))});
}

void write_correlation_csv(const std::vector<CorrelationRow>& rows,
                           std::ostream& os) {
  write_csv_row(os, {"year", "cor_2", "cor_3", "cor_4", "cor_5"});
  for (const auto& row : rows)
    write_csv_row(os, {format_number(row.year), csv_cell(row.cor[0]),
                       csv_cell(row.cor[1]), csv_cell(row.cor[2]),
                       csv_cell(row.cor[3])});
}

void write_empirical_f_csv(const EmpiricalFSeries& series, std::ostream& os) {
  write_csv_row(os, {"k", "n", "value", "numerator", "denominator"});
  for (const auto& pt : series.points)
    write_csv_row(os, {format_number(pt.k),
                       format_number(static_cast<double>(pt.n)),
                       format_number(pt.value),
                       format_number(static_cast<double>(pt.numerator)),
                       format_number(static_cast<double>(pt.denominator))});
}

}  // namespace collab
