#include "bullyrank/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "bullyrank/paths.hpp"
#include "bullyrank/rng.hpp"
#include "bullyrank/vulnerability.hpp"

namespace bullyrank::corpus {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::runtime_error(where + ": " + what);
}

constexpr std::int64_t kSecondsPerDay = 86400;

// Howard Hinnant's civil-date arithmetic.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const int yoe = y - era * 400;
  const int doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const int doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return static_cast<std::int64_t>(era) * 146097 + doe - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const int doe = static_cast<int>(z - era * 146097);
  const int yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const int mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = static_cast<int>(yoe + era * 400) + (m <= 2);
}

int days_in_month(int y, int m) {
  static const int lens[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) return 29;
  return lens[m - 1];
}

}  // namespace

std::int64_t parse_timestamp(const std::string& iso) {
  int y, mo, d, h, mi, s;
  char z;
  if (std::sscanf(iso.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &s, &z) != 7 ||
      z != 'Z' || iso.size() != 20)
    throw std::runtime_error("bad timestamp (want YYYY-MM-DDThh:mm:ssZ): " + iso);
  if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo) || h < 0 || h > 23 || mi < 0 ||
      mi > 59 || s < 0 || s > 59)
    throw std::runtime_error("timestamp out of range: " + iso);
  return days_from_civil(y, mo, d) * kSecondsPerDay + h * 3600 + mi * 60 + s;
}

std::string format_timestamp(std::int64_t t) {
  std::int64_t days = t / kSecondsPerDay;
  std::int64_t rem = t % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    --days;
  }
  int y, mo, d;
  civil_from_days(days, y, mo, d);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", y, mo, d,
                static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                static_cast<int>(rem % 60));
  return buf;
}

std::string to_string(Gender g) {
  switch (g) {
    case Gender::female: return "female";
    case Gender::male: return "male";
    default: return "other";
  }
}
std::string to_string(Race r) { return r == Race::white ? "white" : "nonwhite"; }
std::string to_string(Ethnicity e) {
  return e == Ethnicity::hispanic_latino ? "hispanic_latino" : "other";
}
std::string to_string(BullyingHistory b) {
  switch (b) {
    case BullyingHistory::none: return "none";
    case BullyingHistory::within_1_month: return "within_1_month";
    case BullyingHistory::one_to_two_months: return "one_to_two_months";
    default: return "more_than_two_months";
  }
}
std::string to_string(InternetUse i) {
  switch (i) {
    case InternetUse::lt_1h_weekly: return "lt_1h_weekly";
    case InternetUse::lt_4h_daily: return "lt_4h_daily";
    case InternetUse::four_to_six_h_daily: return "four_to_six_h_daily";
    default: return "gt_6h_daily";
  }
}

Gender gender_from_string(const std::string& s) {
  if (s == "female") return Gender::female;
  if (s == "male") return Gender::male;
  if (s == "other") return Gender::other;
  throw std::runtime_error("unknown gender value: \"" + s + "\"");
}
Race race_from_string(const std::string& s) {
  if (s == "white") return Race::white;
  if (s == "nonwhite") return Race::nonwhite;
  throw std::runtime_error("unknown race value: \"" + s + "\"");
}
Ethnicity ethnicity_from_string(const std::string& s) {
  if (s == "hispanic_latino") return Ethnicity::hispanic_latino;
  if (s == "other") return Ethnicity::other;
  throw std::runtime_error("unknown ethnicity value: \"" + s + "\"");
}
BullyingHistory bullying_history_from_string(const std::string& s) {
  if (s == "none") return BullyingHistory::none;
  if (s == "within_1_month") return BullyingHistory::within_1_month;
  if (s == "one_to_two_months") return BullyingHistory::one_to_two_months;
  if (s == "more_than_two_months") return BullyingHistory::more_than_two_months;
  throw std::runtime_error("unknown bullying_history value: \"" + s + "\"");
}
InternetUse internet_use_from_string(const std::string& s) {
  if (s == "lt_1h_weekly") return InternetUse::lt_1h_weekly;
  if (s == "lt_4h_daily") return InternetUse::lt_4h_daily;
  if (s == "four_to_six_h_daily") return InternetUse::four_to_six_h_daily;
  if (s == "gt_6h_daily") return InternetUse::gt_6h_daily;
  throw std::runtime_error("unknown internet_use value: \"" + s + "\"");
}

namespace {

// Profile with per-attribute presence, so the fill policy can run after the
// whole file is read (median age needs the full dataset).
struct RawProfile {
  std::string user_id;
  std::optional<int> age;
  std::optional<Gender> gender;
  std::optional<Race> race;
  std::optional<Ethnicity> ethnicity;
  std::optional<bool> depression, anxiety, self_esteem, disciplinary, substance;
  std::optional<BullyingHistory> history;
  std::optional<InternetUse> internet;

  int missing_count() const {
    int n = 0;
    n += !age;
    n += !gender;
    n += !race;
    n += !ethnicity;
    n += !depression;
    n += !anxiety;
    n += !self_esteem;
    n += !history;
    n += !disciplinary;
    n += !substance;
    n += !internet;
    return n;
  }
};

constexpr int kProfileAttributes = 11;

struct RawRecord {
  RawProfile profile;
  std::vector<Message> messages;
};

std::vector<UserRecord> finalize(std::vector<RawRecord>&& raws) {
  std::vector<int> ages;
  std::vector<RawRecord> kept;
  for (auto& r : raws) {
    if (2 * r.profile.missing_count() > kProfileAttributes) {
      std::cerr << "warning: dropping user \"" << r.profile.user_id << "\" ("
                << r.profile.missing_count() << " of " << kProfileAttributes
                << " profile attributes missing)\n";
      continue;
    }
    if (r.profile.age) ages.push_back(*r.profile.age);
    kept.push_back(std::move(r));
  }
  int median_age = 0;
  if (!ages.empty()) {
    std::sort(ages.begin(), ages.end());
    median_age = ages[(ages.size() - 1) / 2];
  }

  std::vector<UserRecord> out;
  out.reserve(kept.size());
  for (auto& r : kept) {
    UserRecord rec;
    auto& p = rec.profile;
    p.user_id = r.profile.user_id;
    p.age = r.profile.age.value_or(median_age);
    p.gender = r.profile.gender.value_or(Gender::other);
    p.race = r.profile.race.value_or(Race::white);
    p.ethnicity = r.profile.ethnicity.value_or(Ethnicity::other);
    p.depression = r.profile.depression.value_or(false);
    p.anxiety = r.profile.anxiety.value_or(false);
    p.self_esteem_issues = r.profile.self_esteem.value_or(false);
    p.bullying_history = r.profile.history.value_or(BullyingHistory::none);
    p.disciplinary_issues = r.profile.disciplinary.value_or(false);
    p.substance_abuse = r.profile.substance.value_or(false);
    p.internet_use = r.profile.internet.value_or(InternetUse::lt_1h_weekly);

    std::set<std::tuple<std::string, std::int64_t, std::string>> seen;
    for (auto& m : r.messages)
      if (seen.insert({m.sender_id, m.timestamp, m.text}).second)
        rec.messages.push_back(std::move(m));
    std::stable_sort(rec.messages.begin(), rec.messages.end(),
                     [](const Message& a, const Message& b) { return a.timestamp < b.timestamp; });
    out.push_back(std::move(rec));
  }
  return out;
}

using json = nlohmann::json;

std::string json_string(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail(where, std::string("missing required field \"") + key + "\"");
  if (!j[key].is_string()) fail(where, std::string("field \"") + key + "\" must be a string");
  return j[key].get<std::string>();
}

template <typename Parse>
auto json_enum(const json& j, const char* key, const std::string& where, Parse parse)
    -> std::optional<decltype(parse(std::string()))> {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_string()) fail(where, std::string("field \"") + key + "\" must be a string");
  try {
    return parse(j[key].get<std::string>());
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

std::optional<bool> json_bool(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_boolean()) fail(where, std::string("field \"") + key + "\" must be a boolean");
  return j[key].get<bool>();
}

RawProfile decode_profile(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "\"profile\" must be an object");
  RawProfile p;
  p.user_id = json_string(j, "user_id", where);
  if (j.contains("age") && !j["age"].is_null()) {
    if (!j["age"].is_number_integer()) fail(where, "field \"age\" must be an integer");
    int age = j["age"].get<int>();
    if (age < 0) fail(where, "field \"age\" must be non-negative");
    p.age = age;
  }
  p.gender = json_enum(j, "gender", where, gender_from_string);
  p.race = json_enum(j, "race", where, race_from_string);
  p.ethnicity = json_enum(j, "ethnicity", where, ethnicity_from_string);
  p.depression = json_bool(j, "depression", where);
  p.anxiety = json_bool(j, "anxiety", where);
  p.self_esteem = json_bool(j, "self_esteem_issues", where);
  p.history = json_enum(j, "bullying_history", where, bullying_history_from_string);
  p.disciplinary = json_bool(j, "disciplinary_issues", where);
  p.substance = json_bool(j, "substance_abuse", where);
  p.internet = json_enum(j, "internet_use", where, internet_use_from_string);
  return p;
}

Message decode_message(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "each message must be an object");
  Message m;
  m.sender_id = json_string(j, "sender_id", where);
  try {
    m.timestamp = parse_timestamp(json_string(j, "timestamp", where));
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
  m.text = json_string(j, "text", where);
  if (m.text.empty()) fail(where, "message text must not be empty at ingestion");
  return m;
}

std::vector<UserRecord> load_json_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::vector<RawRecord> raws;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const std::exception& e) {
      fail(where, std::string("json parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("profile")) fail(where, "missing required field \"profile\"");
    RawRecord r;
    r.profile = decode_profile(j["profile"], where);
    if (!j.contains("messages") || !j["messages"].is_array())
      fail(where, "missing required field \"messages\" (array)");
    for (const auto& mj : j["messages"]) r.messages.push_back(decode_message(mj, where));
    raws.push_back(std::move(r));
  }
  return finalize(std::move(raws));
}

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

std::vector<CsvRow> parse_csv(const std::string& text, const std::string& path) {
  std::vector<CsvRow> rows;
  std::size_t line = 1, i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    CsvRow row;
    row.line = line;
    bool row_done = false;
    while (!row_done) {
      std::string field;
      if (i < n && text[i] == '"') {
        ++i;
        while (true) {
          if (i >= n)
            fail(path + ":" + std::to_string(row.line), "unterminated quoted field");
          char c = text[i++];
          if (c == '"') {
            if (i < n && text[i] == '"') {
              field += '"';
              ++i;
            } else {
              break;
            }
          } else {
            if (c == '\n') ++line;
            field += c;
          }
        }
      } else {
        while (i < n && text[i] != ',' && text[i] != '\n') field += text[i++];
        if (!field.empty() && field.back() == '\r') field.pop_back();
      }
      row.fields.push_back(field);
      if (i >= n) {
        row_done = true;
      } else if (text[i] == ',') {
        ++i;
      } else if (text[i] == '\n') {
        ++i;
        ++line;
        row_done = true;
      } else if (text[i] == '\r' && i + 1 < n && text[i + 1] == '\n') {
        i += 2;
        ++line;
        row_done = true;
      } else {
        fail(path + ":" + std::to_string(line), "malformed csv: expected comma or newline");
      }
    }
    if (row.fields.size() == 1 && row.fields[0].empty()) continue;  // blank line
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

const std::vector<std::string> kProfileHeader = {
    "user_id",   "age",  "gender",           "race",
    "ethnicity", "depression", "anxiety",    "self_esteem_issues",
    "bullying_history", "disciplinary_issues", "substance_abuse", "internet_use"};
const std::vector<std::string> kMessageHeader = {"user_id", "sender_id", "timestamp", "text"};

std::optional<bool> csv_bool(const std::string& s, const std::string& where) {
  if (s.empty()) return std::nullopt;
  if (s == "true") return true;
  if (s == "false") return false;
  fail(where, "boolean field must be \"true\", \"false\", or empty; got \"" + s + "\"");
}

template <typename Parse>
auto csv_enum(const std::string& s, const std::string& where, Parse parse)
    -> std::optional<decltype(parse(std::string()))> {
  if (s.empty()) return std::nullopt;
  try {
    return parse(s);
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<UserRecord> load_csv_pair(const std::string& dir) {
  const std::string ppath = (std::filesystem::path(dir) / "profiles.csv").string();
  const std::string mpath = (std::filesystem::path(dir) / "messages.csv").string();
  auto prows = parse_csv(read_file(ppath), ppath);
  auto mrows = parse_csv(read_file(mpath), mpath);
  if (prows.empty() || prows[0].fields != kProfileHeader)
    fail(ppath + ":1", "header must be exactly: user_id,age,gender,race,ethnicity,depression,"
                       "anxiety,self_esteem_issues,bullying_history,disciplinary_issues,"
                       "substance_abuse,internet_use");
  if (mrows.empty() || mrows[0].fields != kMessageHeader)
    fail(mpath + ":1", "header must be exactly: user_id,sender_id,timestamp,text");

  std::vector<RawRecord> raws;
  std::vector<std::string> order;
  std::map<std::string, std::size_t> index;
  for (std::size_t r = 1; r < prows.size(); ++r) {
    const auto& row = prows[r];
    const std::string where = ppath + ":" + std::to_string(row.line);
    if (row.fields.size() != kProfileHeader.size())
      fail(where, "expected " + std::to_string(kProfileHeader.size()) + " columns, got " +
                      std::to_string(row.fields.size()));
    RawProfile p;
    p.user_id = row.fields[0];
    if (p.user_id.empty()) fail(where, "missing required field \"user_id\"");
    if (index.count(p.user_id)) fail(where, "duplicate user_id \"" + p.user_id + "\"");
    if (!row.fields[1].empty()) {
      try {
        std::size_t pos = 0;
        int age = std::stoi(row.fields[1], &pos);
        if (pos != row.fields[1].size() || age < 0) throw std::invalid_argument("");
        p.age = age;
      } catch (const std::exception&) {
        fail(where, "field \"age\" must be a non-negative integer; got \"" + row.fields[1] + "\"");
      }
    }
    p.gender = csv_enum(row.fields[2], where, gender_from_string);
    p.race = csv_enum(row.fields[3], where, race_from_string);
    p.ethnicity = csv_enum(row.fields[4], where, ethnicity_from_string);
    p.depression = csv_bool(row.fields[5], where);
    p.anxiety = csv_bool(row.fields[6], where);
    p.self_esteem = csv_bool(row.fields[7], where);
    p.history = csv_enum(row.fields[8], where, bullying_history_from_string);
    p.disciplinary = csv_bool(row.fields[9], where);
    p.substance = csv_bool(row.fields[10], where);
    p.internet = csv_enum(row.fields[11], where, internet_use_from_string);
    index[p.user_id] = raws.size();
    RawRecord rec;
    rec.profile = std::move(p);
    raws.push_back(std::move(rec));
  }
  for (std::size_t r = 1; r < mrows.size(); ++r) {
    const auto& row = mrows[r];
    const std::string where = mpath + ":" + std::to_string(row.line);
    if (row.fields.size() != kMessageHeader.size())
      fail(where, "expected 4 columns, got " + std::to_string(row.fields.size()));
    auto it = index.find(row.fields[0]);
    if (it == index.end())
      fail(where, "message references unknown user_id \"" + row.fields[0] + "\"");
    Message m;
    m.sender_id = row.fields[1];
    if (m.sender_id.empty()) fail(where, "missing required field \"sender_id\"");
    try {
      m.timestamp = parse_timestamp(row.fields[2]);
    } catch (const std::exception& e) {
      fail(where, e.what());
    }
    m.text = row.fields[3];
    if (m.text.empty()) fail(where, "message text must not be empty at ingestion");
    raws[it->second].messages.push_back(std::move(m));
  }
  return finalize(std::move(raws));
}

nlohmann::ordered_json profile_to_json(const UserProfile& p) {
  nlohmann::ordered_json j;
  j["user_id"] = p.user_id;
  j["age"] = p.age;
  j["gender"] = to_string(p.gender);
  j["race"] = to_string(p.race);
  j["ethnicity"] = to_string(p.ethnicity);
  j["depression"] = p.depression;
  j["anxiety"] = p.anxiety;
  j["self_esteem_issues"] = p.self_esteem_issues;
  j["bullying_history"] = to_string(p.bullying_history);
  j["disciplinary_issues"] = p.disciplinary_issues;
  j["substance_abuse"] = p.substance_abuse;
  j["internet_use"] = to_string(p.internet_use);
  return j;
}

void save_json_lines(const std::string& path, const std::vector<UserRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  for (const auto& rec : records) {
    nlohmann::ordered_json j;
    j["profile"] = profile_to_json(rec.profile);
    auto msgs = nlohmann::ordered_json::array();
    for (const auto& m : rec.messages) {
      nlohmann::ordered_json mj;
      mj["sender_id"] = m.sender_id;
      mj["timestamp"] = format_timestamp(m.timestamp);
      mj["text"] = m.text;
      msgs.push_back(std::move(mj));
    }
    j["messages"] = std::move(msgs);
    out << j.dump() << '\n';
  }
}

void save_csv_pair(const std::string& dir, const std::vector<UserRecord>& records) {
  std::filesystem::create_directories(dir);
  std::ofstream pf(std::filesystem::path(dir) / "profiles.csv", std::ios::binary);
  std::ofstream mf(std::filesystem::path(dir) / "messages.csv", std::ios::binary);
  if (!pf || !mf) throw std::runtime_error("cannot write csv pair under: " + dir);
  auto join = [](const std::vector<std::string>& fields) {
    std::string s;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) s += ',';
      s += fields[i];
    }
    return s;
  };
  pf << join(kProfileHeader) << '\n';
  mf << join(kMessageHeader) << '\n';
  auto b = [](bool v) { return v ? std::string("true") : std::string("false"); };
  for (const auto& rec : records) {
    const auto& p = rec.profile;
    pf << join({csv_escape(p.user_id), std::to_string(p.age), to_string(p.gender),
                to_string(p.race), to_string(p.ethnicity), b(p.depression), b(p.anxiety),
                b(p.self_esteem_issues), to_string(p.bullying_history),
                b(p.disciplinary_issues), b(p.substance_abuse), to_string(p.internet_use)})
       << '\n';
    for (const auto& m : rec.messages)
      mf << join({csv_escape(p.user_id), csv_escape(m.sender_id), format_timestamp(m.timestamp),
                  csv_escape(m.text)})
         << '\n';
  }
}

}  // namespace

std::vector<UserRecord> load_dataset(const std::string& path, DatasetFormat fmt) {
  return fmt == DatasetFormat::json_lines ? load_json_lines(path) : load_csv_pair(path);
}

void save_dataset(const std::string& path, const std::vector<UserRecord>& records,
                  DatasetFormat fmt) {
  if (fmt == DatasetFormat::json_lines)
    save_json_lines(path, records);
  else
    save_csv_pair(path, records);
}

UserRecord apply_window(const UserRecord& record, const WindowConfig& cfg, std::int64_t now) {
  const std::int64_t lo = now - static_cast<std::int64_t>(cfg.days_limit) * kSecondsPerDay;
  UserRecord out;
  out.profile = record.profile;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < record.messages.size(); ++i) {
    std::int64_t t = record.messages[i].timestamp;
    if (t >= lo && t <= now) keep.push_back(i);
  }
  if (keep.size() > static_cast<std::size_t>(cfg.message_cap)) {
    // most recent wins; ties break toward the later list position
    std::sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) {
      if (record.messages[a].timestamp != record.messages[b].timestamp)
        return record.messages[a].timestamp > record.messages[b].timestamp;
      return a > b;
    });
    keep.resize(static_cast<std::size_t>(cfg.message_cap));
    std::sort(keep.begin(), keep.end());
  }
  out.messages.reserve(keep.size());
  for (std::size_t i : keep) out.messages.push_back(record.messages[i]);
  return out;
}

namespace {

std::vector<std::string> load_template_pool(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open template pool: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw std::runtime_error("template pool is empty: " + path);
  return lines;
}

}  // namespace

std::vector<UserRecord> generate_synthetic(int n_users, std::uint64_t seed,
                                           const GeneratorOptions& opts) {
  if (n_users < 1) throw std::runtime_error("generate_synthetic: n_users must be >= 1");
  if (opts.min_messages < 1 || opts.max_messages < opts.min_messages)
    throw std::runtime_error("generate_synthetic: bad message count range");

  const std::string dir = resolve_data_dir(opts.data_dir);
  const auto abusive = load_template_pool(data_file(dir, "templates_abusive.txt"));
  const auto benign = load_template_pool(data_file(dir, "templates_benign.txt"));

  // Fixed reference instant (2021-06-01T00:00:00Z) so output never depends on
  // the wall clock.
  constexpr std::int64_t kBase = 1622505600;
  constexpr std::int64_t kSpreadDays = 120;

  Rng rng(stage_seed(seed, "generate"));
  std::vector<UserRecord> out;
  out.reserve(static_cast<std::size_t>(n_users));
  for (int u = 0; u < n_users; ++u) {
    UserRecord rec;
    auto& p = rec.profile;
    p.user_id = "user" + std::to_string(u);

    // half "none", the remainder split evenly across the three recency tiers
    double h = rng.uniform();
    if (h < 0.5)
      p.bullying_history = BullyingHistory::none;
    else if (h < 0.5 + 1.0 / 6.0)
      p.bullying_history = BullyingHistory::within_1_month;
    else if (h < 0.5 + 2.0 / 6.0)
      p.bullying_history = BullyingHistory::one_to_two_months;
    else
      p.bullying_history = BullyingHistory::more_than_two_months;

    p.age = rng.uniform_int(10, 18);
    double g = rng.uniform();
    p.gender = g < 0.5 ? Gender::female : (g < 0.95 ? Gender::male : Gender::other);
    p.race = rng.bernoulli(0.4) ? Race::nonwhite : Race::white;
    p.ethnicity = rng.bernoulli(0.25) ? Ethnicity::hispanic_latino : Ethnicity::other;
    p.depression = rng.bernoulli(0.3);
    p.anxiety = rng.bernoulli(0.3);
    p.self_esteem_issues = rng.bernoulli(0.35);
    p.disciplinary_issues = rng.bernoulli(0.25);
    p.substance_abuse = rng.bernoulli(0.15);
    double iu = rng.uniform();
    p.internet_use = iu < 0.15   ? InternetUse::lt_1h_weekly
                     : iu < 0.5  ? InternetUse::lt_4h_daily
                     : iu < 0.8  ? InternetUse::four_to_six_h_daily
                                 : InternetUse::gt_6h_daily;

    const double abuse_rate = 0.05 + 0.75 * vulnerability::vf(p);
    const int n_msgs = rng.uniform_int(opts.min_messages, opts.max_messages);
    rec.messages.reserve(static_cast<std::size_t>(n_msgs));
    for (int m = 0; m < n_msgs; ++m) {
      Message msg;
      msg.sender_id = "peer" + std::to_string(rng.uniform_int(1, 25));
      msg.timestamp =
          kBase - static_cast<std::int64_t>(rng.uniform_int(0, kSpreadDays * 86400 - 1));
      const auto& pool = rng.bernoulli(abuse_rate) ? abusive : benign;
      msg.text = pool[rng.uniform_index(pool.size())];
      rec.messages.push_back(std::move(msg));
    }
    std::set<std::tuple<std::string, std::int64_t, std::string>> seen;
    std::vector<Message> unique;
    for (auto& m : rec.messages)
      if (seen.insert({m.sender_id, m.timestamp, m.text}).second) unique.push_back(std::move(m));
    rec.messages = std::move(unique);
    std::stable_sort(rec.messages.begin(), rec.messages.end(),
                     [](const Message& a, const Message& b) { return a.timestamp < b.timestamp; });
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace bullyrank::corpus
