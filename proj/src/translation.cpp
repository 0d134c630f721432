#include "lxt/translation.hpp"

#include "lxt/errors.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace lxt {

namespace {

constexpr std::string_view kPairHeader = "concept\tsource_word\ttarget_word";

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

std::vector<double> unit_row(const Matrix& m, Index row) {
  const auto r = m.row(row).cast<double>();
  const double n = r.norm();
  std::vector<double> out(static_cast<std::size_t>(m.cols()), 0.0);
  if (n == 0.0) return out;
  for (Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(j)] = r(j) / n;
  return out;
}

double similarity(const std::vector<double>& unit_query, const Matrix& candidates, Index row) {
  const auto r = candidates.row(row).cast<double>();
  const double n = r.norm();
  if (n == 0.0) return 0.0;
  double dot = 0.0;
  for (Index j = 0; j < candidates.cols(); ++j) dot += unit_query[static_cast<std::size_t>(j)] * r(j);
  return dot / n;
}

}  // namespace

std::vector<TranslationPair> read_pairs(std::istream& in, const std::string& source_name) {
  std::vector<TranslationPair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line_no == 1 && line == kPairHeader) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 3 || cols[1].empty() || cols[2].empty()) {
      throw DataError(source_name + ":" + std::to_string(line_no) +
                      ": expected 3 tab-separated columns concept/source_word/target_word");
    }
    out.push_back({std::move(cols[0]), std::move(cols[1]), std::move(cols[2])});
  }
  return out;
}

std::vector<TranslationPair> load_pairs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open pair file " + path.string());
  return read_pairs(in, path.string());
}

void write_pairs(const std::filesystem::path& path, std::span<const TranslationPair> pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << kPairHeader << '\n';
  for (const auto& p : pairs) out << p.concept_name << '\t' << p.source_word << '\t' << p.target_word << '\n';
}

std::size_t cosine_rank(const Matrix& query_matrix, Index query_row, const Matrix& candidates, Index truth) {
  if (query_matrix.cols() != candidates.cols()) {
    throw std::invalid_argument("cosine_rank: dim " + std::to_string(query_matrix.cols()) + " vs " +
                                std::to_string(candidates.cols()));
  }
  if (query_row < 0 || query_row >= query_matrix.rows()) throw std::out_of_range("cosine_rank: query row");
  if (truth < 0 || truth >= candidates.rows()) throw std::out_of_range("cosine_rank: truth row");
  const auto q = unit_row(query_matrix, query_row);
  const double true_sim = similarity(q, candidates, truth);
  std::size_t ahead = 0;
  for (Index i = 0; i < candidates.rows(); ++i) {
    if (i == truth) continue;
    const double s = similarity(q, candidates, i);
    if (s > true_sim || (s == true_sim && i < truth)) ++ahead;
  }
  return ahead + 1;
}

std::string to_string(RankDirection d) {
  return d == RankDirection::source_to_target ? "source_to_target" : "target_to_source";
}

RankDirection parse_rank_direction(std::string_view name) {
  if (name == "source_to_target") return RankDirection::source_to_target;
  if (name == "target_to_source") return RankDirection::target_to_source;
  throw ConfigError("unknown rank direction '" + std::string(name) +
                    "' (expected source_to_target or target_to_source)");
}

RankReport translation_rank(const Matrix& source, const Vocabulary& source_vocab, const Matrix& target,
                            const Vocabulary& target_vocab, std::span<const TranslationPair> pairs,
                            RankDirection direction) {
  if (source.cols() != target.cols()) {
    throw std::invalid_argument("translation_rank: embedding dims differ (" + std::to_string(source.cols()) +
                                " vs " + std::to_string(target.cols()) + ")");
  }
  if (static_cast<std::size_t>(source.rows()) != source_vocab.size() ||
      static_cast<std::size_t>(target.rows()) != target_vocab.size()) {
    throw std::invalid_argument("translation_rank: matrix rows do not match vocabulary size");
  }
  const bool forward = direction == RankDirection::source_to_target;
  RankReport report;
  report.direction = direction;
  report.candidates = forward ? target_vocab.size() : source_vocab.size();
  std::vector<double> ranks;
  for (const auto& p : pairs) {
    PairRank r;
    r.pair = p;
    r.source_oov = !source_vocab.contains(p.source_word);
    r.target_oov = !target_vocab.contains(p.target_word);
    if (!r.source_oov && !r.target_oov) {
      const Index s = source_vocab.id(p.source_word);
      const Index t = target_vocab.id(p.target_word);
      r.rank = forward ? cosine_rank(source, s, target, t) : cosine_rank(target, t, source, s);
      ranks.push_back(static_cast<double>(*r.rank));
      if (*r.rank == 1) ++report.rank1_count;
    } else {
      ++report.oov_count;
    }
    report.pairs.push_back(std::move(r));
  }
  if (!ranks.empty()) {
    std::sort(ranks.begin(), ranks.end());
    const std::size_t mid = ranks.size() / 2;
    report.median_rank = ranks.size() % 2 == 1 ? ranks[mid] : (ranks[mid - 1] + ranks[mid]) / 2.0;
  }
  return report;
}

namespace {

std::string format_median(double m) {
  std::ostringstream os;
  os << m;
  return os.str();
}

std::string status_of(const PairRank& r) {
  if (r.source_oov && r.target_oov) return "oov_both";
  if (r.source_oov) return "oov_source";
  if (r.target_oov) return "oov_target";
  return "ok";
}

}  // namespace

void write_rank_tsv(std::ostream& out, const RankReport& report) {
  out << "concept\tsource_word\ttarget_word\trank\tstatus\n";
  for (const auto& r : report.pairs) {
    out << r.pair.concept_name << '\t' << r.pair.source_word << '\t' << r.pair.target_word << '\t'
        << (r.rank ? std::to_string(*r.rank) : "NA") << '\t' << status_of(r) << '\n';
  }
  out << "# direction\t" << to_string(report.direction) << '\n';
  out << "# candidates\t" << report.candidates << '\n';
  out << "# median_rank\t" << (report.median_rank ? format_median(*report.median_rank) : "NA") << '\n';
  out << "# rank1_count\t" << report.rank1_count << '\n';
  out << "# oov_count\t" << report.oov_count << '\n';
}

std::string format_rank_table(const RankReport& report) {
  std::size_t w_concept = 7, w_src = 6, w_tgt = 6;
  for (const auto& r : report.pairs) {
    w_concept = std::max(w_concept, r.pair.concept_name.size());
    w_src = std::max(w_src, r.pair.source_word.size());
    w_tgt = std::max(w_tgt, r.pair.target_word.size());
  }
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(w_concept)) << "concept" << "  " << std::setw(static_cast<int>(w_src))
     << "source" << "  " << std::setw(static_cast<int>(w_tgt)) << "target" << "  rank\n";
  for (const auto& r : report.pairs) {
    os << std::setw(static_cast<int>(w_concept)) << r.pair.concept_name << "  " << std::setw(static_cast<int>(w_src))
       << r.pair.source_word << "  " << std::setw(static_cast<int>(w_tgt)) << r.pair.target_word << "  "
       << (r.rank ? std::to_string(*r.rank) : status_of(r)) << '\n';
  }
  os << "\n" << report.pairs.size() - report.oov_count << " ranked of " << report.pairs.size() << " pairs against "
     << report.candidates << " candidates (" << to_string(report.direction) << ")\n";
  os << "median rank: " << (report.median_rank ? format_median(*report.median_rank) : "NA") << "\n";
  os << "rank-1 hits: " << report.rank1_count << "\n";
  return os.str();
}

}  // namespace lxt
