#include "truncls/dataset.hpp"

#include <stdexcept>

namespace truncls {

void Dataset::validate() const {
  if (xs.rows() != ys.size()) {
    throw std::invalid_argument("dataset: xs has " + std::to_string(xs.rows()) +
                                " rows but ys has " + std::to_string(ys.size()) +
                                " entries");
  }
  if (xs.rows() < 1 || xs.cols() < 1) {
    throw std::invalid_argument("dataset: needs at least one row and one column");
  }
  if (!xs.allFinite() || !ys.allFinite()) {
    throw std::invalid_argument("dataset: non-finite entry");
  }
}

}  // namespace truncls
