#ifndef HOLOMOD_TYPES_HPP
#define HOLOMOD_TYPES_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace holomod {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

// A tangent curve whose velocity leaves the image of the anchor map.
struct NotLeafTangent : Error {
  explicit NotLeafTangent(const std::string& msg) : Error(msg) {}
};

// Numerical rank of the bivector changed along an integrated path.
struct RankChange : Error {
  explicit RankChange(const std::string& msg) : Error(msg) {}
};

// Odd numerical rank: the rank threshold straddles a singular value.
struct OddRank : Error {
  explicit OddRank(const std::string& msg) : Error(msg) {}
};

// Matrix logarithm inapplicable (eigenvalue on the closed negative axis).
struct LogDomain : Error {
  explicit LogDomain(const std::string& msg) : Error(msg) {}
};

struct BlowUp : Error {
  explicit BlowUp(const std::string& msg) : Error(msg) {}
};

}  // namespace holomod

#endif
