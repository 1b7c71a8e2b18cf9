#pragma once

// Dataset schema, ingestion/serialization, the 90-day/100-message window,
// and the seeded synthetic generator.

#include <cstdint>
#include <string>
#include <vector>

namespace bullyrank::corpus {

enum class Gender { female, male, other };
enum class Race { white, nonwhite };
enum class Ethnicity { hispanic_latino, other };
enum class BullyingHistory { none, within_1_month, one_to_two_months, more_than_two_months };
enum class InternetUse { lt_1h_weekly, lt_4h_daily, four_to_six_h_daily, gt_6h_daily };

std::string to_string(Gender g);
std::string to_string(Race r);
std::string to_string(Ethnicity e);
std::string to_string(BullyingHistory b);
std::string to_string(InternetUse i);

// All parsers throw std::runtime_error on unknown values.
Gender gender_from_string(const std::string& s);
Race race_from_string(const std::string& s);
Ethnicity ethnicity_from_string(const std::string& s);
BullyingHistory bullying_history_from_string(const std::string& s);
InternetUse internet_use_from_string(const std::string& s);

struct UserProfile {
  std::string user_id;
  int age = 0;
  Gender gender = Gender::other;
  Race race = Race::white;
  Ethnicity ethnicity = Ethnicity::other;
  bool depression = false;
  bool anxiety = false;
  bool self_esteem_issues = false;
  BullyingHistory bullying_history = BullyingHistory::none;
  bool disciplinary_issues = false;
  bool substance_abuse = false;
  InternetUse internet_use = InternetUse::lt_1h_weekly;

  bool operator==(const UserProfile&) const = default;
};

struct Message {
  std::string sender_id;
  std::int64_t timestamp = 0;  // seconds since the Unix epoch, UTC
  std::string text;

  bool operator==(const Message&) const = default;
};

struct UserRecord {
  UserProfile profile;
  std::vector<Message> messages;  // kept sorted by timestamp after loading

  bool operator==(const UserRecord&) const = default;
};

struct WindowConfig {
  int days_limit = 90;
  int message_cap = 100;
};

enum class DatasetFormat { json_lines, csv_pair };

// ISO-8601 "YYYY-MM-DDThh:mm:ssZ" <-> epoch seconds. parse throws on anything else.
std::int64_t parse_timestamp(const std::string& iso);
std::string format_timestamp(std::int64_t epoch_seconds);

// json_lines: `path` is a file, one user object per line.
// csv_pair:   `path` is a directory holding profiles.csv and messages.csv.
// Malformed input throws std::runtime_error naming the offending line. Records
// with more than half of the profile attributes missing are dropped with a
// stderr warning; surviving gaps take defaults (booleans false, enums their
// none/other value, age the dataset median). Duplicate messages (same sender,
// timestamp, text) are removed. Messages come back sorted by timestamp.
std::vector<UserRecord> load_dataset(const std::string& path, DatasetFormat fmt);
void save_dataset(const std::string& path, const std::vector<UserRecord>& records,
                  DatasetFormat fmt);

// Keeps messages stamped within [now - days_limit days, now], then the
// message_cap most recent of those; original relative order preserved.
UserRecord apply_window(const UserRecord& record, const WindowConfig& cfg, std::int64_t now);

struct GeneratorOptions {
  int min_messages = 50;
  int max_messages = 120;
  std::string data_dir;  // template pools; empty = bundled default
};

// Seed-deterministic synthetic stand-in for the private dataset. History tiers
// draw at 50% / 16.66% / 16.66% / 16.66%; each user's share of abusive
// templates rises with their vulnerability factor.
std::vector<UserRecord> generate_synthetic(int n_users, std::uint64_t seed,
                                           const GeneratorOptions& opts = {});

}  // namespace bullyrank::corpus
