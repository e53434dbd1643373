#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vismca/annotation/store.hpp"

namespace vismca::cooccurrence {

/// One person x object cell. detected_count counts instances (circle size),
/// detected_image_count counts images (link width); callers choose.
struct MatrixCell {
  std::string person;
  std::string object;
  std::size_t detected_count = 0;
  std::size_t detected_image_count = 0;
  std::optional<double> mean_confidence;  // empty when detected_count == 0
  std::size_t corrected_count = 0;        // images whose corrected labels contain object

  friend bool operator==(const MatrixCell&, const MatrixCell&) = default;
};

struct Marginal {
  std::string key;
  std::size_t detected_count = 0;
  std::size_t detected_image_count = 0;
  std::size_t corrected_count = 0;

  friend bool operator==(const Marginal&, const Marginal&) = default;
};

/// Marginals are plain row and column sums of the cells.
struct MatrixSummary {
  std::vector<Marginal> per_person;  // dataset people order
  std::vector<Marginal> per_object;  // dataset class order
  std::size_t detected_total = 0;
  std::size_t corrected_total = 0;
};

/// Dense people x classes grid, row-major in dataset order.
class DistributionMatrix {
 public:
  DistributionMatrix(std::vector<std::string> people, std::vector<std::string> objects,
                     std::vector<MatrixCell> cells, MatrixSummary summary);

  [[nodiscard]] const std::vector<std::string>& people() const noexcept { return people_; }
  [[nodiscard]] const std::vector<std::string>& objects() const noexcept { return objects_; }
  [[nodiscard]] const std::vector<MatrixCell>& cells() const noexcept { return cells_; }
  [[nodiscard]] const MatrixSummary& summary() const noexcept { return summary_; }

  [[nodiscard]] const MatrixCell& at(std::size_t person_idx, std::size_t object_idx) const {
    return cells_.at(person_idx * objects_.size() + object_idx);
  }
  /// Throws Error(BadArgument) for an unknown person or object.
  [[nodiscard]] const MatrixCell& cell(std::string_view person, std::string_view object) const;

 private:
  std::vector<std::string> people_;
  std::vector<std::string> objects_;
  std::vector<MatrixCell> cells_;
  MatrixSummary summary_;
};

DistributionMatrix build_matrix(const annotation::CorrectionStore& store);

/// person,object,detected_count,detected_image_count,mean_confidence,corrected_count
/// sorted by person then object; mean_confidence has six decimals, empty when
/// undefined.
std::string matrix_csv(const DistributionMatrix& matrix);

struct PersonOverlap {
  std::string person;
  std::size_t overlap_cells = 0;
  std::size_t detected_only_cells = 0;
  std::size_t corrected_only_cells = 0;

  friend bool operator==(const PersonOverlap&, const PersonOverlap&) = default;
};

/// Per person: cells where detector and correction agree, and the cells
/// only one side marks.
std::vector<PersonOverlap> overlap_stats(const DistributionMatrix& matrix);

}  // namespace vismca::cooccurrence
