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

#include "qcausal/entropy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

namespace qcausal {

namespace {

constexpr double kAlphaOne = 1e-6;
constexpr double kFloor = 1e-12;
constexpr double kRankThreshold = 1e-9;
constexpr double kSupportThreshold = 1e-10;

std::vector<std::string> to_vector(std::span<const std::string> labels) {
  return {labels.begin(), labels.end()};
}

void check_disjoint(std::initializer_list<std::span<const std::string>> groups,
                    const char* what) {
  std::set<std::string> seen;
  for (const auto& g : groups) {
    for (const auto& name : g) {
      if (!seen.insert(name).second) {
        throw Error(std::string(what) + ": label " + name + " appears in more than one subset");
      }
    }
  }
}

std::string format_alpha(double alpha) {
  std::ostringstream out;
  out.precision(12);
  out << alpha;
  return out.str();
}

}  // namespace

EntropySpec EntropySpec::von_neumann() { return EntropySpec(EntropyFamily::VonNeumann, 1.0); }

EntropySpec EntropySpec::renyi(double alpha) {
  if (std::isnan(alpha) || alpha <= 0.0) {
    throw Error("EntropySpec: Renyi order must be positive, got " + format_alpha(alpha));
  }
  if (std::isinf(alpha)) return min();
  if (std::abs(alpha - 1.0) < kAlphaOne) return von_neumann();
  return EntropySpec(EntropyFamily::Renyi, alpha);
}

EntropySpec EntropySpec::min() { return EntropySpec(EntropyFamily::Min, kInfinity); }

EntropySpec EntropySpec::max() { return EntropySpec(EntropyFamily::Max, 0.0); }

EntropySpec EntropySpec::parse(std::string_view text) {
  if (text == "vn") return von_neumann();
  if (text == "min") return min();
  if (text == "max") return max();
  constexpr std::string_view prefix = "renyi:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string_view value = text.substr(prefix.size());
    if (value == "inf") return min();
    double alpha = 0.0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), alpha);
    if (ec == std::errc() && end == value.data() + value.size() && !value.empty()) {
      return renyi(alpha);
    }
  }
  throw Error("EntropySpec: cannot parse '" + std::string(text) +
              "' (expected vn, renyi:<alpha>, min or max)");
}

bool EntropySpec::validated() const {
  if (family_ != EntropyFamily::Renyi) return true;
  return alpha_ >= 0.5;
}

std::string EntropySpec::name() const {
  switch (family_) {
    case EntropyFamily::VonNeumann:
      return "vn";
    case EntropyFamily::Renyi:
      return "renyi:" + format_alpha(alpha_);
    case EntropyFamily::Min:
      return "min";
    case EntropyFamily::Max:
      return "max";
  }
  return "unknown";
}

double entropy_from_spectrum(const RealVector& eigenvalues, const EntropySpec& spec) {
  if (eigenvalues.size() == 0) throw Error("entropy: empty spectrum");
  RealVector p = eigenvalues;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) < -tol::kPsd) {
      std::ostringstream msg;
      msg << "entropy: eigenvalue " << p(i) << " is below -" << tol::kPsd;
      throw Error(msg.str());
    }
    if (p(i) < 0.0) p(i) = 0.0;
  }
  const double total = p.sum();
  if (total <= 0.0) throw Error("entropy: spectrum sums to zero");
  p /= total;

  switch (spec.family()) {
    case EntropyFamily::VonNeumann: {
      double h = 0.0;
      for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) >= kFloor) h -= p(i) * std::log2(p(i));
      }
      return h;
    }
    case EntropyFamily::Renyi: {
      const double alpha = spec.alpha();
      const double floor = alpha < 1.0 ? kFloor : 0.0;
      double s = 0.0;
      for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) > floor) s += std::pow(p(i), alpha);
      }
      return std::log2(s) / (1.0 - alpha);
    }
    case EntropyFamily::Min:
      return -std::log2(p.maxCoeff());
    case EntropyFamily::Max: {
      const double cut = kRankThreshold * p.maxCoeff();
      const auto rank = (p.array() > cut).count();
      return std::log2(static_cast<double>(rank));
    }
  }
  throw Error("entropy: unknown family");
}

double entropy(const DensityOperator& rho, std::span<const std::string> subsystem,
               const EntropySpec& spec) {
  if (subsystem.empty()) return 0.0;
  check_disjoint({subsystem}, "entropy");
  for (const auto& name : subsystem) rho.dims().index_of(name);
  if (subsystem.size() == rho.dims().size()) return entropy(rho, spec);
  const LabeledOperator marginal = partial_trace(rho.op(), subsystem);
  return entropy_from_spectrum(herm_eigenvalues(marginal.matrix()), spec);
}

double entropy(const DensityOperator& rho, const EntropySpec& spec) {
  return entropy_from_spectrum(herm_eigenvalues(rho.matrix()), spec);
}

double conditional_entropy(const DensityOperator& rho, std::span<const std::string> y,
                           std::span<const std::string> x, const EntropySpec& spec) {
  check_disjoint({x, y}, "conditional_entropy");
  std::vector<std::string> xy = to_vector(x);
  xy.insert(xy.end(), y.begin(), y.end());
  return entropy(rho, xy, spec) - entropy(rho, x, spec);
}

double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dims() != sigma.dims()) throw Error("relative_entropy: dimension mismatch");
  const EigenSystem es = herm_eig(sigma.matrix());
  const double smax = std::max(es.values.maxCoeff(), 0.0);
  double cross = 0.0;
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    const auto v = es.vectors.col(j);
    const double weight = (v.adjoint() * rho.matrix() * v)(0, 0).real();
    if (es.values(j) <= kFloor * std::max(smax, 1.0)) {
      if (weight > kSupportThreshold) return kInfinity;
      continue;
    }
    cross += weight * std::log2(es.values(j));
  }
  const double h = entropy(rho);
  return -h - cross;
}

double ssa_gap(const DensityOperator& rho, std::span<const std::string> x,
               std::span<const std::string> y, std::span<const std::string> z) {
  check_disjoint({x, y, z}, "ssa_gap");
  std::vector<std::string> xy = to_vector(x);
  xy.insert(xy.end(), y.begin(), y.end());
  std::vector<std::string> yz = to_vector(y);
  yz.insert(yz.end(), z.begin(), z.end());
  std::vector<std::string> xyz = xy;
  xyz.insert(xyz.end(), z.begin(), z.end());
  return entropy(rho, xy) + entropy(rho, yz) - entropy(rho, xyz) - entropy(rho, y);
}

}  // namespace qcausal
