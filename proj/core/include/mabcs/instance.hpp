#pragma once
/*
Bandit instance model for the cost-subsidy setting: K arms indexed in
non-decreasing order of known sampling cost, Bernoulli reward means in
[0, 1], and a subsidy factor alpha in (0, 1) that sets the quality
threshold mu_cs = (1 - alpha) * max_k mu_k.
*/

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mabcs {

struct BanditInstance {
  std::vector<double> means;  // expected Bernoulli reward per arm, in [0, 1]
  std::vector<double> costs;  // known sampling cost per arm, non-decreasing
  double alpha{0.0};          // subsidy factor, in (0, 1)

  std::size_t num_arms() const { return means.size(); }
};

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws InstanceError unless all BanditInstance invariants hold.
void validate(const BanditInstance& inst);

enum class ParseErrorKind {
  malformed_line,
  too_few_arms,
  mean_out_of_range,
  negative_cost,
  alpha_out_of_range,
};

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& what)
      : std::runtime_error(what), kind_(kind), line_(line) {}
  ParseErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }  // 1-based line in the input text

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

struct ParseResult {
  BanditInstance instance;
  bool resorted{false};  // arms were re-sorted by cost (stable) on parse
};

// Instance file grammar (UTF-8 text, '#' starts a comment, blank lines
// ignored): first content line "alpha <real>", second "K <integer>", then
// K lines "<mean> <cost>".
ParseResult parse_instance(std::string_view text);

// Serializes in the grammar above; parse(format(x)) reproduces x. Each arm
// line may carry an optional trailing comment (one entry per arm).
std::string format_instance(const BanditInstance& inst,
                            const std::vector<std::string>& arm_comments = {});

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Every static quantity derived from an instance. Arm indices are 0-based
// throughout the library; the CLI prints them 1-based.
struct InstanceAnalysis {
  // inputs echoed for downstream calculators
  std::vector<double> means;
  std::vector<double> costs;
  double alpha{0.0};

  double mu_star{0.0};        // best mean
  std::size_t i_star{0};      // arm bearing mu_star (lowest index on ties)
  double mu_cs{0.0};          // (1 - alpha) * mu_star
  std::vector<std::size_t> feasible_set;     // {k : mu_k >= mu_cs}
  std::size_t a_star{0};                     // cheapest feasible arm
  std::vector<std::size_t> cheap_arms;       // indices < a_star
  std::vector<std::size_t> expensive_arms;   // indices > a_star
  std::optional<std::size_t> a_dagger;       // best-reward cheap arm, if any
  double mu_dagger{0.0};                     // meaningful only if a_dagger
  std::vector<std::size_t> dagger_capable;   // {k : (1-alpha) mu_k - mu_dagger > 0}
  std::vector<double> quality_gaps;  // mu_cs - mu_k
  std::vector<double> cost_gaps;     // c_k - c_{a*}
  std::vector<double> reward_gaps;   // mu_star - mu_k
  std::vector<double> dagger_gaps;   // (1-alpha) mu_k - mu_dagger; empty if no a_dagger

  std::size_t num_arms() const { return means.size(); }
};

// Pure; expects a valid instance (see validate).
InstanceAnalysis analyze(const BanditInstance& inst);

struct IngestOptions {
  double rating_scale_max{5.0};
  std::uint64_t cost_seed{0};
  double alpha{0.3};  // written into the produced instance; sweeps override it
};

struct IngestResult {
  BanditInstance instance;
  std::vector<std::string> genres;           // one per arm, cost-sorted order
  std::vector<std::string> excluded_genres;  // mapped genres with no ratings
  std::size_t unmapped_items{0};             // rating rows whose item has no genre
};

// Builds one arm per genre from CSV streams: ratings rows "item_id,rating"
// and genre-map rows "item_id,genre" (one row per (item, genre) pair; items
// tagged with several genres contribute to each). The arm mean is
// sum(ratings) / (count * rating_scale_max); costs are i.i.d. Uniform(0,1)
// drawn from a CounterRng seeded with cost_seed, assigned to genres in
// lexicographic order, after which arms are sorted by cost.
IngestResult ingest_ratings(std::istream& ratings_csv, std::istream& genre_map_csv,
                            const IngestOptions& opts);

}  // namespace mabcs
