#pragma once

#include <string>
#include <vector>

#include "oracles.hpp"
#include "ordscore/optimizer.hpp"

namespace testing_support {

inline std::vector<std::string> labels(int k) {
  std::vector<std::string> out;
  for (int i = 1; i <= k; ++i) out.push_back("L" + std::to_string(i));
  return out;
}

/// Dataset with one factor "f" and response y.
inline ordscore::Dataset single_factor_dataset(const oracle::SyntheticData& d, int k) {
  ordscore::Dataset data;
  data.response_name = "y";
  data.response = d.y;
  data.factors.emplace("f", ordscore::OrderedFactor("f", labels(k), d.codes));
  return data;
}

inline ordscore::ModelSpec single_factor_spec(ordscore::Mapping mapping) {
  ordscore::ModelSpec spec;
  spec.factors.push_back({"f", std::move(mapping)});
  return spec;
}

}  // namespace testing_support
