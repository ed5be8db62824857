#include "gbscore/cli/run_config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gbscore/error.h"

namespace gbscore::cli {

namespace {

[[noreturn]] void fail(const std::string& detail) {
  throw Error(ErrorCode::kConfigError, detail);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool is_bare_key(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

class ValueParser {
 public:
  ValueParser(std::string_view text, int line) : text_(text), line_(line) {}

  ConfigValue parse_document_value() {
    ConfigValue v = parse_value();
    skip_space();
    if (pos_ < text_.size() && text_[pos_] != '#') error("trailing characters after value");
    return v;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail("line " + std::to_string(line_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  ConfigValue parse_value() {
    skip_space();
    if (pos_ >= text_.size()) error("missing value");
    const char c = text_[pos_];
    if (c == '[') return parse_array();
    if (c == '"') return parse_string();
    return parse_bare();
  }

  ConfigValue parse_array() {
    ConfigValue v;
    v.is_array = true;
    ++pos_;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ']') {
      ++pos_;
      return v;
    }
    while (true) {
      ConfigValue item = parse_value();
      if (item.is_array) error("nested arrays are not supported");
      v.items.push_back(std::move(item));
      skip_space();
      if (pos_ >= text_.size()) error("unterminated array");
      if (text_[pos_] == ',') {
        ++pos_;
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ']') {
          ++pos_;
          return v;
        }
        continue;
      }
      if (text_[pos_] == ']') {
        ++pos_;
        return v;
      }
      error("expected ',' or ']' in array");
    }
  }

  ConfigValue parse_string() {
    ConfigValue v;
    v.quoted = true;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\\') {
        if (pos_ >= text_.size()) error("unterminated escape");
        const char e = text_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: error(std::string("unknown escape \\") + e);
        }
      }
      v.text.push_back(c);
    }
    if (pos_ >= text_.size()) error("unterminated string");
    ++pos_;
    return v;
  }

  ConfigValue parse_bare() {
    ConfigValue v;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' &&
           text_[pos_] != '#' && text_[pos_] != ' ' && text_[pos_] != '\t') {
      ++pos_;
    }
    v.text = std::string(text_.substr(start, pos_ - start));
    if (v.text.empty()) error("missing value");
    return v;
  }

  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

// Strips a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted && c == '\\') {
      ++i;
    } else if (c == '"') {
      quoted = !quoted;
    } else if (c == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

double as_number(const std::string& key, const ConfigValue& v) {
  if (v.is_array || v.quoted) fail(key + ": expected a number");
  double out = 0.0;
  const char* end = v.text.data() + v.text.size();
  auto [ptr, ec] = std::from_chars(v.text.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    fail(key + ": '" + v.text + "' is not a number");
  }
  return out;
}

std::int64_t as_integer(const std::string& key, const ConfigValue& v) {
  const double d = as_number(key, v);
  if (d != std::floor(d) || std::abs(d) > 9.0e15) fail(key + ": expected an integer");
  return static_cast<std::int64_t>(d);
}

std::uint64_t as_seed(const std::string& key, const ConfigValue& v) {
  if (v.is_array || v.quoted) fail(key + ": expected an integer");
  std::uint64_t out = 0;
  const char* end = v.text.data() + v.text.size();
  auto [ptr, ec] = std::from_chars(v.text.data(), end, out);
  if (ec != std::errc() || ptr != end) fail(key + ": '" + v.text + "' is not a seed");
  return out;
}

bool as_bool(const std::string& key, const ConfigValue& v) {
  if (!v.is_array && !v.quoted) {
    if (v.text == "true") return true;
    if (v.text == "false") return false;
  }
  fail(key + ": expected true or false");
}

std::string as_string(const std::string& key, const ConfigValue& v) {
  if (v.is_array) fail(key + ": expected a string");
  return v.text;
}

std::vector<std::string> as_string_list(const std::string& key, const ConfigValue& v) {
  if (!v.is_array) fail(key + ": expected an array");
  std::vector<std::string> out;
  for (const ConfigValue& item : v.items) out.push_back(as_string(key, item));
  return out;
}

std::vector<double> as_number_list(const std::string& key, const ConfigValue& v) {
  if (!v.is_array) fail(key + ": expected an array");
  std::vector<double> out;
  for (const ConfigValue& item : v.items) out.push_back(as_number(key, item));
  return out;
}

std::array<double, 2> as_pair(const std::string& key, const ConfigValue& v) {
  const std::vector<double> xs = as_number_list(key, v);
  if (xs.size() != 2) fail(key + ": expected [good, bad]");
  return {xs[0], xs[1]};
}

const std::vector<std::string> kTrainFields = {
    "n_rounds",         "learning_rate",  "max_depth",        "lambda",
    "alpha",            "gamma",          "min_child_weight", "max_delta_step",
    "scale_pos_weight", "subsample",      "colsample_bytree", "colsample_bylevel",
    "base_score"};

}  // namespace

ConfigDocument ConfigDocument::parse(std::string_view text) {
  ConfigDocument doc;
  std::set<std::string> seen;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail("line " + std::to_string(line_no) + ": bad section header");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!is_bare_key(name)) {
        fail("line " + std::to_string(line_no) + ": bad section name");
      }
      section = std::string(name);
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    if (!is_bare_key(key)) fail("line " + std::to_string(line_no) + ": bad key");
    std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    if (!seen.insert(full).second) {
      fail("line " + std::to_string(line_no) + ": duplicate key '" + full + "'");
    }
    ConfigValue value = ValueParser(line.substr(eq + 1), line_no).parse_document_value();
    doc.entries_.emplace_back(std::move(full), std::move(value));
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const ConfigValue* ConfigDocument::find(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

void set_train_field(TrainConfig& cfg, const std::string& field, double value) {
  auto integer = [&](int& slot) {
    if (value != std::floor(value)) fail(field + ": expected an integer");
    slot = static_cast<int>(value);
  };
  if (field == "n_rounds") integer(cfg.n_rounds);
  else if (field == "learning_rate") cfg.learning_rate = value;
  else if (field == "max_depth") integer(cfg.max_depth);
  else if (field == "lambda") cfg.lambda = value;
  else if (field == "alpha") cfg.alpha = value;
  else if (field == "gamma") cfg.gamma = value;
  else if (field == "min_child_weight") cfg.min_child_weight = value;
  else if (field == "max_delta_step") cfg.max_delta_step = value;
  else if (field == "scale_pos_weight") cfg.scale_pos_weight = value;
  else if (field == "subsample") cfg.subsample = value;
  else if (field == "colsample_bytree") cfg.colsample_bytree = value;
  else if (field == "colsample_bylevel") cfg.colsample_bylevel = value;
  else if (field == "base_score") cfg.base_score = value;
  else fail("unknown training parameter '" + field + "'");
}

RunConfig run_config_from_document(const ConfigDocument& doc) {
  RunConfig rc;
  for (const auto& [key, v] : doc.entries()) {
    const auto dot = key.rfind('.');
    const std::string section = dot == std::string::npos ? "" : key.substr(0, dot);
    const std::string name = dot == std::string::npos ? key : key.substr(dot + 1);

    if (section.empty()) {
      if (name == "seed") rc.seed = as_seed(key, v);
      else fail("unknown key '" + key + "'");
    } else if (section == "data") {
      if (name == "train") rc.data.train = as_string(key, v);
      else if (name == "oot") rc.data.oot = as_string(key, v);
      else if (name == "label") rc.data.label = as_string(key, v);
      else if (name == "label_positive") rc.data.label_positive = as_string(key, v);
      else if (name == "label_negative") rc.data.label_negative = as_string(key, v);
      else if (name == "categorical") rc.data.categorical = as_string_list(key, v);
      else if (name == "exclude") rc.data.exclude = as_string_list(key, v);
      else if (name == "missing") rc.data.missing = as_string_list(key, v);
      else if (name == "delimiter") {
        const std::string d = as_string(key, v);
        if (d.size() != 1) fail(key + ": expected a single character");
        rc.data.delimiter = d[0];
      } else {
        fail("unknown key '" + key + "'");
      }
    } else if (section == "train") {
      if (std::find(kTrainFields.begin(), kTrainFields.end(), name) == kTrainFields.end()) {
        fail("unknown key '" + key + "'");
      }
      set_train_field(rc.train, name, as_number(key, v));
    } else if (section == "sampling") {
      if (name == "mode") {
        const std::string mode = as_string(key, v);
        if (mode == "none") rc.sampling = SamplingMode::kNone;
        else if (mode == "reweight") rc.sampling = SamplingMode::kReweight;
        else if (mode == "smote") rc.sampling = SamplingMode::kSmote;
        else fail(key + ": expected none, reweight or smote");
      } else if (name == "target_prior") {
        rc.reweight.target_prior = as_pair(key, v);
      } else if (name == "target_cost") {
        rc.reweight.target_cost = as_pair(key, v);
      } else if (name == "k_neighbors") {
        rc.smote.k_neighbors = static_cast<int>(as_integer(key, v));
      } else if (name == "target_ratio") {
        rc.smote.target_ratio = as_number(key, v);
      } else {
        fail("unknown key '" + key + "'");
      }
    } else if (section == "cv") {
      if (name == "k") rc.cv.k = static_cast<int>(as_integer(key, v));
      else if (name == "metric") {
        try {
          rc.cv.metric.id = parse_metric(as_string(key, v));
        } catch (const Error& e) {
          fail(key + ": " + e.what());
        }
      } else if (name == "threshold") rc.cv.metric.threshold = as_number(key, v);
      else if (name == "beta") rc.cv.metric.beta = as_number(key, v);
      else fail("unknown key '" + key + "'");
    } else if (section == "cv.grid") {
      if (std::find(kTrainFields.begin(), kTrainFields.end(), name) == kTrainFields.end()) {
        fail("unknown key '" + key + "'");
      }
      std::vector<double> values = as_number_list(key, v);
      if (values.empty()) fail(key + ": empty grid axis");
      rc.cv.grid.emplace_back(name, std::move(values));
    } else if (section == "explain") {
      if (name == "background") {
        const std::int64_t b = as_integer(key, v);
        if (b < 1) fail(key + ": must be >= 1");
        rc.explain.background = static_cast<std::size_t>(b);
      } else if (name == "max_features") {
        const std::int64_t m = as_integer(key, v);
        if (m < 1) fail(key + ": must be >= 1");
        rc.explain.max_features = static_cast<std::size_t>(m);
      } else if (name == "rows") {
        rc.explain.rows = as_string(key, v);
      } else {
        fail("unknown key '" + key + "'");
      }
    } else if (section == "report") {
      if (name == "cutoffs") rc.report.cutoffs = as_number_list(key, v);
      else if (name == "bins") rc.report.bins = static_cast<int>(as_integer(key, v));
      else if (name == "reliability_bins") {
        rc.report.reliability_bins = static_cast<int>(as_integer(key, v));
      } else if (name == "threshold") rc.report.threshold = as_number(key, v);
      else if (name == "beta") rc.report.beta = as_number(key, v);
      else if (name == "lower_is_riskier") rc.report.lower_is_riskier = as_bool(key, v);
      else if (name == "score_column") rc.report.score_column = as_string(key, v);
      else fail("unknown key '" + key + "'");
    } else if (section == "output") {
      if (name == "dir") rc.output_dir = as_string(key, v);
      else fail("unknown key '" + key + "'");
    } else {
      fail("unknown section '" + section + "'");
    }
  }
  try {
    rc.train.validate();
  } catch (const Error& e) {
    fail("[train] " + std::string(e.what()));
  }
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return run_config_from_document(ConfigDocument::load(path));
}

std::vector<TrainConfig> expand_grid(const TrainConfig& base, const CvSettings& cv) {
  std::vector<TrainConfig> out = {base};
  for (const auto& [field, values] : cv.grid) {
    std::vector<TrainConfig> next;
    for (const TrainConfig& cfg : out) {
      for (double value : values) {
        TrainConfig c = cfg;
        set_train_field(c, field, value);
        next.push_back(c);
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<std::size_t> parse_row_selector(const std::string& selector) {
  std::vector<std::size_t> rows;
  auto number = [&](std::string_view s) {
    s = trim(s);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      fail("row selector '" + selector + "': bad index '" + std::string(s) + "'");
    }
    return v;
  };
  std::string_view rest = selector;
  while (!trim(rest).empty()) {
    const std::size_t comma = rest.find(',');
    const std::string_view part = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view() : rest.substr(comma + 1);
    const std::size_t dash = part.find('-');
    if (dash == std::string_view::npos) {
      rows.push_back(number(part));
      continue;
    }
    const std::size_t lo = number(part.substr(0, dash));
    const std::size_t hi = number(part.substr(dash + 1));
    if (hi < lo) fail("row selector '" + selector + "': descending range");
    for (std::size_t r = lo; r <= hi; ++r) rows.push_back(r);
  }
  if (rows.empty()) fail("row selector is empty");
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

}  // namespace gbscore::cli
