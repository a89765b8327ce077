// Copyright 2026 The qcausal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <limits>
#include <span>
#include <string>
#include <string_view>

#include "qcausal/tensor.hpp"

namespace qcausal {

/// Returned by relative_entropy when the support condition fails.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class EntropyFamily { VonNeumann, Renyi, Min, Max };

/// Entropy measure selector. All values are in bits.
class EntropySpec {
 public:
  static EntropySpec von_neumann();
  /// alpha within 1e-6 of 1 gives von Neumann; alpha = +inf gives min-entropy.
  static EntropySpec renyi(double alpha);
  static EntropySpec min();
  static EntropySpec max();
  /// "vn", "renyi:<alpha>" (alpha may be "inf"), "min" or "max".
  static EntropySpec parse(std::string_view text);

  EntropyFamily family() const { return family_; }
  /// Renyi order; 1 for von Neumann, +inf for min, 0 for max.
  double alpha() const { return alpha_; }
  /// True when entropy monotonicity under the relevant channels is
  /// established for this family: von Neumann, Renyi alpha in [1/2, 1) or
  /// (1, inf), min and max.
  bool validated() const;
  /// Max-entropy monotonicity rests on an external result only.
  bool externally_cited() const { return family_ == EntropyFamily::Max; }
  /// Round-trips through parse().
  std::string name() const;

  bool operator==(const EntropySpec&) const = default;

 private:
  EntropySpec(EntropyFamily family, double alpha) : family_(family), alpha_(alpha) {}
  EntropyFamily family_;
  double alpha_;
};

/// Entropy of a spectrum. Eigenvalues in [-kPsd, 0) are clipped and the
/// spectrum renormalized; anything more negative is an error.
double entropy_from_spectrum(const RealVector& eigenvalues, const EntropySpec& spec);

/// Entropy of the marginal on `subsystem`; an empty subsystem has entropy 0.
double entropy(const DensityOperator& rho, std::span<const std::string> subsystem,
               const EntropySpec& spec = EntropySpec::von_neumann());
double entropy(const DensityOperator& rho,
               const EntropySpec& spec = EntropySpec::von_neumann());

/// H(XY) - H(X).
double conditional_entropy(const DensityOperator& rho, std::span<const std::string> y,
                           std::span<const std::string> x,
                           const EntropySpec& spec = EntropySpec::von_neumann());

/// Tr rho (log2 rho - log2 sigma), or kInfinity when supp(rho) is not
/// contained in supp(sigma).
double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma);

/// H(XY) + H(YZ) - H(XYZ) - H(Y), von Neumann.
double ssa_gap(const DensityOperator& rho, std::span<const std::string> x,
               std::span<const std::string> y, std::span<const std::string> z);

}  // namespace qcausal
