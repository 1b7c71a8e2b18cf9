#pragma once

// Vulnerability factor: weighted share of risk conditions a profile meets.

#include "bullyrank/corpus.hpp"

namespace bullyrank::vulnerability {

struct VulnerabilityWeights {
  double age = 0.04;
  double gender = 0.12;
  double race_ethnicity = 0.02;
  double past_bullying = 0.42;
  double internet_use = 0.17;
  double internal_issues = 0.28;
  double external_issues = 0.21;

  double total() const {
    return age + gender + race_ethnicity + past_bullying + internet_use + internal_issues +
           external_issues;
  }
};

// Sum of weights whose condition the profile meets, over the sum of all
// weights. Throws std::runtime_error if the weight table sums to zero.
double vf(const corpus::UserProfile& profile, const VulnerabilityWeights& w = {});

}  // namespace bullyrank::vulnerability
