#pragma once

#include <Eigen/Dense>

namespace truncls {

/// A regression sample: n feature rows paired with n scalar outputs.
struct Dataset {
  Eigen::MatrixXd xs;  ///< n x d feature matrix; row i is the i-th input
  Eigen::VectorXd ys;  ///< n outputs

  Eigen::Index n() const { return xs.rows(); }
  Eigen::Index d() const { return xs.cols(); }

  /// Throws std::invalid_argument when the shapes disagree, the sample is
  /// empty, or any entry is non-finite.
  void validate() const;
};

}  // namespace truncls
