#include "dcm/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "dcm/error.hpp"

namespace dcm {

VariableSet::VariableSet(std::initializer_list<Index> indices)
    : VariableSet(std::vector<Index>(indices)) {}

VariableSet::VariableSet(std::vector<Index> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

VariableSet VariableSet::range(Index begin, Index end) {
  VariableSet out;
  out.indices_.reserve(end > begin ? end - begin : 0);
  for (Index i = begin; i < end; ++i) out.indices_.push_back(i);
  return out;
}

bool VariableSet::contains(Index i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

void VariableSet::validate(Index p) const {
  if (!indices_.empty() && indices_.back() >= p) {
    throw ValidationError("variable index " + std::to_string(indices_.back()) +
                          " out of range for p = " + std::to_string(p));
  }
}

VariableSet set_intersection(const VariableSet& a, const VariableSet& b) {
  std::vector<Index> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return VariableSet(std::move(out));
}

VariableSet set_difference(const VariableSet& a, const VariableSet& b) {
  std::vector<Index> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return VariableSet(std::move(out));
}

bool is_subset(const VariableSet& a, const VariableSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

double StandardizedCondition::correlation(Index i, Index j) const {
  return columns_.col(static_cast<Eigen::Index>(i))
      .dot(columns_.col(static_cast<Eigen::Index>(j)));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

}  // namespace

DataMatrix parse_delimited(std::istream& in, char delimiter) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> names;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    for (auto field : split(line, delimiter)) names.push_back(unquote(field));
    break;
  }
  if (names.empty()) throw ValidationError("input has no header row");

  std::unordered_set<std::string> seen;
  for (const auto& name : names) {
    if (name.empty()) throw ValidationError("empty variable name in header");
    if (!seen.insert(name).second) {
      throw ValidationError("duplicate variable name '" + name + "'");
    }
  }

  const std::size_t p = names.size();
  std::vector<double> values;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, delimiter);
    if (fields.size() != p) {
      throw ValidationError("ragged row at line " + std::to_string(line_no) +
                            ": expected " + std::to_string(p) + " fields, got " +
                            std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < p; ++j) {
      const auto field = trim(fields[j]);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() ||
          !std::isfinite(v)) {
        throw ValidationError("non-numeric value '" + std::string(field) + "' at line " +
                              std::to_string(line_no) + ", variable '" + names[j] + "'");
      }
      values.push_back(v);
    }
    ++n;
  }
  if (n < kMinSamples) {
    throw ValidationError("need at least " + std::to_string(kMinSamples) +
                          " samples, got " + std::to_string(n));
  }

  DataMatrix out;
  out.variable_names = std::move(names);
  out.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < p; ++j) {
      out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = values[r * p + j];
    }
  }
  return out;
}

DataMatrix ingest(const std::filesystem::path& path, Delimiter delimiter) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  char delim = ',';
  if (delimiter == Delimiter::Tab) {
    delim = '\t';
  } else if (delimiter == Delimiter::Auto) {
    const auto ext = path.extension().string();
    if (ext == ".tsv" || ext == ".tab" || ext == ".txt") delim = '\t';
  }
  return parse_delimited(in, delim);
}

DataMatrix align_to(const DataMatrix& first, const DataMatrix& second) {
  std::unordered_map<std::string, Index> position;
  for (Index j = 0; j < second.p(); ++j) position.emplace(second.variable_names[j], j);

  std::vector<std::string> missing;  // in first, not in second
  std::vector<std::string> extra;    // in second, not in first
  std::unordered_set<std::string> first_names(first.variable_names.begin(),
                                              first.variable_names.end());
  for (const auto& name : first.variable_names) {
    if (!position.contains(name)) missing.push_back(name);
  }
  for (const auto& name : second.variable_names) {
    if (!first_names.contains(name)) extra.push_back(name);
  }
  if (!missing.empty() || !extra.empty()) {
    std::vector<std::string> offending = missing;
    offending.insert(offending.end(), extra.begin(), extra.end());
    std::ostringstream msg;
    msg << "variable names differ between conditions (" << offending.size()
        << " unmatched):";
    for (std::size_t k = 0; k < std::min<std::size_t>(5, offending.size()); ++k) {
      msg << ' ' << offending[k];
    }
    throw ValidationError(msg.str());
  }

  DataMatrix out;
  out.variable_names = first.variable_names;
  out.values.resize(second.values.rows(), second.values.cols());
  for (Index j = 0; j < first.p(); ++j) {
    out.values.col(static_cast<Eigen::Index>(j)) =
        second.values.col(static_cast<Eigen::Index>(position.at(first.variable_names[j])));
  }
  return out;
}

StandardizedCondition standardize(const DataMatrix& data) {
  if (data.variable_names.size() != data.p()) {
    throw ValidationError("variable_names length does not match column count");
  }
  Eigen::MatrixXd cols = data.values;
  for (Eigen::Index j = 0; j < cols.cols(); ++j) {
    auto c = cols.col(j);
    if (!c.allFinite()) {
      throw ValidationError("non-finite value in variable '" +
                            data.variable_names[static_cast<Index>(j)] + "'");
    }
    const double scale = c.cwiseAbs().maxCoeff();
    c.array() -= c.mean();
    const double norm = c.norm();
    if (norm <= 1e-12 * std::max(scale, 1e-300) || norm == 0.0) {
      throw ValidationError("constant column '" +
                            data.variable_names[static_cast<Index>(j)] + "'");
    }
    c /= norm;
  }
  return StandardizedCondition(std::move(cols), data.variable_names);
}

StandardizedCondition subset_columns(const StandardizedCondition& cond,
                                     std::span<const Index> keep) {
  Eigen::MatrixXd cols(cond.columns_.rows(), static_cast<Eigen::Index>(keep.size()));
  std::vector<std::string> names;
  names.reserve(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    cols.col(static_cast<Eigen::Index>(k)) =
        cond.columns_.col(static_cast<Eigen::Index>(keep[k]));
    names.push_back(cond.names_.at(keep[k]));
  }
  return StandardizedCondition(std::move(cols), std::move(names));
}

Eigen::VectorXd centroid(const StandardizedCondition& cond, const VariableSet& A) {
  if (A.empty()) throw ValidationError("centroid of an empty variable set");
  A.validate(cond.p());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cond.n()));
  for (Index j : A) w += cond.matrix().col(static_cast<Eigen::Index>(j));
  w /= static_cast<double>(A.size());
  return w;
}

double avg_corr(const StandardizedCondition& cond, Index i, const VariableSet& A) {
  if (i >= cond.p()) throw ValidationError("variable index out of range");
  return centroid(cond, A).dot(cond.matrix().col(static_cast<Eigen::Index>(i)));
}

}  // namespace dcm
