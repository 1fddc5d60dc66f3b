#include "mabcs/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "mabcs/rng.hpp"

namespace mabcs {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string_view strip_comment(std::string_view s) {
  const auto pos = s.find('#');
  return pos == std::string_view::npos ? s : s.substr(0, pos);
}

bool parse_double(std::string_view tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) toks.push_back(s.substr(i, j - i));
    i = j;
  }
  return toks;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  // shortest representation that round-trips
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    if (parse_double(buf, back) && back == v) break;
  }
  return buf;
}

void validate(const BanditInstance& inst) {
  const std::size_t k = inst.num_arms();
  if (inst.costs.size() != k) throw InstanceError("means and costs differ in length");
  if (k < 2) throw InstanceError("instance needs at least 2 arms");
  if (!(inst.alpha > 0.0 && inst.alpha < 1.0)) {
    throw InstanceError("alpha must lie strictly inside (0, 1)");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!(inst.means[i] >= 0.0 && inst.means[i] <= 1.0)) {
      throw InstanceError("arm mean outside [0, 1]");
    }
    if (!(inst.costs[i] >= 0.0)) throw InstanceError("negative arm cost");
    if (i > 0 && inst.costs[i] < inst.costs[i - 1]) {
      throw InstanceError("costs not in non-decreasing order");
    }
  }
}

ParseResult parse_instance(std::string_view text) {
  double alpha = 0.0;
  std::size_t declared_k = 0;
  bool have_alpha = false;
  bool have_k = false;
  std::vector<double> means;
  std::vector<double> costs;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::size_t last_line = 1;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    last_line = line_no;
    const auto toks = split_ws(line);

    if (!have_alpha) {
      double v = 0.0;
      if (toks.size() != 2 || toks[0] != "alpha" || !parse_double(toks[1], v)) {
        throw ParseError(ParseErrorKind::malformed_line, line_no,
                         "line " + std::to_string(line_no) + ": expected 'alpha <real>'");
      }
      if (!(v > 0.0 && v < 1.0)) {
        throw ParseError(ParseErrorKind::alpha_out_of_range, line_no,
                         "line " + std::to_string(line_no) + ": alpha must be in (0, 1)");
      }
      alpha = v;
      have_alpha = true;
      continue;
    }
    if (!have_k) {
      unsigned long long v = 0;
      const auto tok = toks.size() == 2 ? toks[1] : std::string_view{};
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (toks.size() != 2 || toks[0] != "K" || ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError(ParseErrorKind::malformed_line, line_no,
                         "line " + std::to_string(line_no) + ": expected 'K <integer>'");
      }
      if (v < 2) {
        throw ParseError(ParseErrorKind::too_few_arms, line_no,
                         "line " + std::to_string(line_no) + ": K must be at least 2");
      }
      declared_k = static_cast<std::size_t>(v);
      have_k = true;
      continue;
    }
    if (means.size() == declared_k) {
      throw ParseError(ParseErrorKind::malformed_line, line_no,
                       "line " + std::to_string(line_no) + ": unexpected content after " +
                           std::to_string(declared_k) + " arm lines");
    }
    double mean = 0.0;
    double cost = 0.0;
    if (toks.size() != 2 || !parse_double(toks[0], mean) || !parse_double(toks[1], cost)) {
      throw ParseError(ParseErrorKind::malformed_line, line_no,
                       "line " + std::to_string(line_no) + ": expected '<mean> <cost>'");
    }
    if (!(mean >= 0.0 && mean <= 1.0)) {
      throw ParseError(ParseErrorKind::mean_out_of_range, line_no,
                       "line " + std::to_string(line_no) + ": mean outside [0, 1]");
    }
    if (!(cost >= 0.0)) {
      throw ParseError(ParseErrorKind::negative_cost, line_no,
                       "line " + std::to_string(line_no) + ": negative cost");
    }
    means.push_back(mean);
    costs.push_back(cost);
  }

  if (!have_alpha || !have_k || means.size() != declared_k) {
    throw ParseError(ParseErrorKind::malformed_line, last_line,
                     "line " + std::to_string(last_line) + ": incomplete instance (expected " +
                         (have_k ? std::to_string(declared_k) + " arm lines" : "header") + ")");
  }

  ParseResult res;
  res.instance.alpha = alpha;
  std::vector<std::size_t> order(declared_k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return costs[a] < costs[b]; });
  for (std::size_t i = 0; i < declared_k; ++i) {
    if (order[i] != i) res.resorted = true;
    res.instance.means.push_back(means[order[i]]);
    res.instance.costs.push_back(costs[order[i]]);
  }
  validate(res.instance);
  return res;
}

std::string format_instance(const BanditInstance& inst,
                            const std::vector<std::string>& arm_comments) {
  std::ostringstream out;
  out << "alpha " << format_double(inst.alpha) << "\n";
  out << "K " << inst.num_arms() << "\n";
  for (std::size_t i = 0; i < inst.num_arms(); ++i) {
    out << format_double(inst.means[i]) << " " << format_double(inst.costs[i]);
    if (i < arm_comments.size() && !arm_comments[i].empty()) {
      out << "  # " << arm_comments[i];
    }
    out << "\n";
  }
  return out.str();
}

InstanceAnalysis analyze(const BanditInstance& inst) {
  InstanceAnalysis a;
  a.means = inst.means;
  a.costs = inst.costs;
  a.alpha = inst.alpha;
  const std::size_t k = inst.num_arms();

  a.i_star = 0;
  for (std::size_t i = 1; i < k; ++i) {
    if (inst.means[i] > inst.means[a.i_star]) a.i_star = i;
  }
  a.mu_star = inst.means[a.i_star];
  a.mu_cs = (1.0 - inst.alpha) * a.mu_star;

  for (std::size_t i = 0; i < k; ++i) {
    if (inst.means[i] >= a.mu_cs) a.feasible_set.push_back(i);
  }
  a.a_star = a.feasible_set.front();  // costs ascending: first feasible is cheapest

  for (std::size_t i = 0; i < a.a_star; ++i) a.cheap_arms.push_back(i);
  for (std::size_t i = a.a_star + 1; i < k; ++i) a.expensive_arms.push_back(i);

  if (!a.cheap_arms.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < a.a_star; ++i) {
      if (inst.means[i] > inst.means[best]) best = i;
    }
    a.a_dagger = best;
    a.mu_dagger = inst.means[best];
    a.dagger_gaps.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      a.dagger_gaps[i] = (1.0 - inst.alpha) * inst.means[i] - a.mu_dagger;
      if (a.dagger_gaps[i] > 0.0) a.dagger_capable.push_back(i);
    }
  }

  a.quality_gaps.resize(k);
  a.cost_gaps.resize(k);
  a.reward_gaps.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    a.quality_gaps[i] = a.mu_cs - inst.means[i];
    a.cost_gaps[i] = inst.costs[i] - inst.costs[a.a_star];
    a.reward_gaps[i] = a.mu_star - inst.means[i];
  }
  return a;
}

namespace {

// Splits a CSV row on the first comma only; genre names may not contain commas.
bool split2(std::string_view line, std::string_view& a, std::string_view& b) {
  const auto pos = line.find(',');
  if (pos == std::string_view::npos) return false;
  a = trim(line.substr(0, pos));
  b = trim(line.substr(pos + 1));
  return !a.empty() && !b.empty();
}

}  // namespace

IngestResult ingest_ratings(std::istream& ratings_csv, std::istream& genre_map_csv,
                            const IngestOptions& opts) {
  if (!(opts.rating_scale_max > 0.0)) throw InstanceError("rating scale max must be positive");

  std::unordered_map<std::string, std::vector<std::string>> item_genres;
  std::map<std::string, std::pair<double, std::uint64_t>> genre_acc;  // sum, count

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(genre_map_csv, line)) {
    ++line_no;
    const auto content = trim(strip_comment(line));
    if (content.empty()) continue;
    std::string_view item, genre;
    if (!split2(content, item, genre)) {
      throw ParseError(ParseErrorKind::malformed_line, line_no,
                       "genre map line " + std::to_string(line_no) + ": expected 'item_id,genre'");
    }
    item_genres[std::string(item)].emplace_back(genre);
    genre_acc.emplace(std::string(genre), std::make_pair(0.0, std::uint64_t{0}));
  }

  IngestResult res;
  line_no = 0;
  std::size_t rating_rows = 0;
  while (std::getline(ratings_csv, line)) {
    ++line_no;
    const auto content = trim(strip_comment(line));
    if (content.empty()) continue;
    std::string_view item, rating_tok;
    double rating = 0.0;
    if (!split2(content, item, rating_tok) || !parse_double(rating_tok, rating)) {
      throw ParseError(ParseErrorKind::malformed_line, line_no,
                       "ratings line " + std::to_string(line_no) + ": expected 'item_id,rating'");
    }
    if (!(rating > 0.0 && rating <= opts.rating_scale_max)) {
      throw ParseError(ParseErrorKind::mean_out_of_range, line_no,
                       "ratings line " + std::to_string(line_no) + ": rating outside (0, scale_max]");
    }
    ++rating_rows;
    const auto it = item_genres.find(std::string(item));
    if (it == item_genres.end()) {
      ++res.unmapped_items;
      continue;
    }
    for (const auto& g : it->second) {
      auto& acc = genre_acc[g];
      acc.first += rating;
      acc.second += 1;
    }
  }
  if (rating_rows == 0) throw InstanceError("ratings input is empty");

  struct Arm {
    std::string genre;
    double mean;
    double cost;
  };
  std::vector<Arm> arms;
  CounterRng cost_rng(substream_seed(opts.cost_seed, 0x636f7374 /* "cost" */));
  for (const auto& [genre, acc] : genre_acc) {  // std::map: lexicographic order
    if (acc.second == 0) {
      res.excluded_genres.push_back(genre);
      continue;
    }
    const double cost = cost_rng.next_uniform();
    arms.push_back({genre, acc.first / (static_cast<double>(acc.second) * opts.rating_scale_max), cost});
  }
  if (arms.empty()) throw InstanceError("no genre received any rating");

  std::stable_sort(arms.begin(), arms.end(),
                   [](const Arm& a, const Arm& b) { return a.cost < b.cost; });

  res.instance.alpha = opts.alpha;
  for (const auto& arm : arms) {
    res.instance.means.push_back(arm.mean);
    res.instance.costs.push_back(arm.cost);
    res.genres.push_back(arm.genre);
  }
  validate(res.instance);
  return res;
}

}  // namespace mabcs
