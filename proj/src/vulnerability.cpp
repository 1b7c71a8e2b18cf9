#include "bullyrank/vulnerability.hpp"

#include <stdexcept>

namespace bullyrank::vulnerability {

double vf(const corpus::UserProfile& p, const VulnerabilityWeights& w) {
  const double denom = w.total();
  if (denom <= 0.0) throw std::runtime_error("vulnerability weights sum to zero");

  using corpus::BullyingHistory;
  using corpus::Ethnicity;
  using corpus::Gender;
  using corpus::InternetUse;
  using corpus::Race;

  double sum = 0.0;
  if (p.age >= 11 && p.age <= 16) sum += w.age;
  if (p.gender == Gender::female) sum += w.gender;
  if (p.race == Race::nonwhite || p.ethnicity == Ethnicity::hispanic_latino)
    sum += w.race_ethnicity;
  if (p.bullying_history != BullyingHistory::none) sum += w.past_bullying;
  if (p.internet_use == InternetUse::four_to_six_h_daily ||
      p.internet_use == InternetUse::gt_6h_daily)
    sum += w.internet_use;
  if (p.depression || p.anxiety || p.self_esteem_issues) sum += w.internal_issues;
  if (p.disciplinary_issues || p.substance_abuse) sum += w.external_issues;
  return sum / denom;
}

}  // namespace bullyrank::vulnerability
