#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lipmass {

/// Largest chart dimension handled anywhere in the toolkit.
inline constexpr int kMaxDim = 7;
inline constexpr int kMinDim = 3;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

/// Integer multi-index into a lattice; only the first `n` entries are used.
using Index = std::array<std::int64_t, kMaxDim>;

enum class ErrorCode {
  kInvalidArgument = 1,
  kDomain,
  kNumerical,
  kValidation,
  kIo,
  kUnsupported,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool ok, ErrorCode code, const char* what) {
  if (!ok) throw Error(code, what);
}
inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

inline void check_dimension(int n) {
  require(n >= kMinDim && n <= kMaxDim, ErrorCode::kInvalidArgument,
          "dimension must satisfy 3 <= n <= 7, got " + std::to_string(n));
}

}  // namespace lipmass
