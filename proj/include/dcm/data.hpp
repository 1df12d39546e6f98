#pragma once

#include <cstddef>
#include <filesystem>
#include <initializer_list>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dcm {

using Index = std::size_t;

/// Raw sample-by-variable data for one condition.
struct DataMatrix {
  Eigen::MatrixXd values;  // n x p, column-major
  std::vector<std::string> variable_names;

  Index n() const { return static_cast<Index>(values.rows()); }
  Index p() const { return static_cast<Index>(values.cols()); }
};

/// Sorted, duplicate-free set of variable indices.
class VariableSet {
 public:
  VariableSet() = default;
  VariableSet(std::initializer_list<Index> indices);
  /// Sorts and deduplicates.
  explicit VariableSet(std::vector<Index> indices);

  static VariableSet range(Index begin, Index end);

  const std::vector<Index>& indices() const { return indices_; }
  Index size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(Index i) const;
  Index operator[](Index k) const { return indices_[k]; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  /// Throws ValidationError if any index is >= p.
  void validate(Index p) const;

  bool operator==(const VariableSet&) const = default;

 private:
  std::vector<Index> indices_;
};

VariableSet set_intersection(const VariableSet& a, const VariableSet& b);
VariableSet set_difference(const VariableSet& a, const VariableSet& b);
bool is_subset(const VariableSet& a, const VariableSet& b);

struct FactorModel;
struct Residualized;

/// One condition with every column centered and scaled to unit Euclidean
/// norm, so column inner products are Pearson sample correlations.
///
/// Only the n x p columns are stored; the correlation matrix is never formed.
/// The variance-one scaling used by the variance estimator is the stored
/// value times sqrt(n).
class StandardizedCondition {
 public:
  Index n() const { return static_cast<Index>(columns_.rows()); }
  Index p() const { return static_cast<Index>(columns_.cols()); }
  const std::vector<std::string>& variable_names() const { return names_; }

  std::span<const double> column(Index j) const {
    return {columns_.col(static_cast<Eigen::Index>(j)).data(), n()};
  }
  const Eigen::MatrixXd& matrix() const { return columns_; }

  /// Inner product of columns i and j, i.e. the sample correlation r_ij.
  double correlation(Index i, Index j) const;

 private:
  StandardizedCondition(Eigen::MatrixXd columns, std::vector<std::string> names)
      : columns_(std::move(columns)), names_(std::move(names)) {}

  friend StandardizedCondition standardize(const DataMatrix& data);
  friend StandardizedCondition subset_columns(const StandardizedCondition&,
                                              std::span<const Index>);
  friend Residualized residualize(const StandardizedCondition&,
                                  const VariableSet&, const FactorModel&);

  Eigen::MatrixXd columns_;
  std::vector<std::string> names_;
};

enum class Delimiter { Auto, Comma, Tab };

/// Minimum sample count accepted by ingest (sqrt(n - 3) Fisher weights).
inline constexpr Index kMinSamples = 4;

/// Parses delimited text: header row of variable names, then one row per
/// sample. Throws ValidationError on malformed content.
DataMatrix parse_delimited(std::istream& in, char delimiter);

/// Reads a delimited file. Auto picks tab for .tsv/.tab/.txt, comma
/// otherwise. Throws IoError if the file cannot be opened.
DataMatrix ingest(const std::filesystem::path& path,
                  Delimiter delimiter = Delimiter::Auto);

/// Reorders `second`'s columns to follow `first`'s variable-name order.
/// Throws ValidationError naming up to five unmatched variables.
DataMatrix align_to(const DataMatrix& first, const DataMatrix& second);

/// Centers each column and scales it to unit norm. Throws ValidationError
/// on a constant or non-finite column.
StandardizedCondition standardize(const DataMatrix& data);

/// Condition restricted to the listed columns, in the given order.
StandardizedCondition subset_columns(const StandardizedCondition& cond,
                                     std::span<const Index> keep);

/// Mean of the standardized columns in A (length n).
Eigen::VectorXd centroid(const StandardizedCondition& cond,
                         const VariableSet& A);

/// (1/|A|) sum_{j in A} r_ij, evaluated as centroid(A) . column_i.
double avg_corr(const StandardizedCondition& cond, Index i,
                const VariableSet& A);

}  // namespace dcm
