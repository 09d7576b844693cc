#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csr/structure.hpp"
#include "json.hpp"

namespace csr {

struct SessionConfig {
  Tolerances tol;
  int jet_order = kDefaultJetOrder;
  std::optional<std::pair<double, double>> box;  // per-axis interval; [-2, 2] when unset
  int grid = 9;
  std::uint64_t seed = 0;
  bool timing = false;  // record elapsed_ms (breaks byte-identical reports)
};

/// A named point set produced by a `points` command.
struct PointSet {
  std::string label;
  int p = 0;
  std::vector<Point> points;
};

/// Interpreter state for the command language: named rings, elements and
/// morphisms, the current ring, and the accumulated JSON report.
class Session {
 public:
  explicit Session(SessionConfig cfg = {});

  /// Runs one input line; ';' separates several commands. Returns the
  /// display text of each command. Throws ScriptError for unknown
  /// commands, malformed arguments and undefined names; library errors
  /// (parse, parity, arity, ill-formed morphisms) are rethrown as
  /// ScriptError too.
  std::vector<std::string> execute(std::string_view line, int line_no = 0);

  bool quit_requested() const { return quit_; }
  bool any_fail() const { return fails_ > 0; }
  const SessionConfig& config() const { return cfg_; }
  const std::vector<PointSet>& point_sets() const { return point_sets_; }

  /// {config, entries: [{command, inputs, verdict, provenance, witnesses,
  /// elapsed_ms}], results: {key: value}, status}.
  nlohmann::json report() const;

 private:
  struct Outcome {
    std::string display;
    std::string verdict;
    std::optional<Provenance> provenance;
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json witnesses = nlohmann::json::array();
    std::optional<std::string> result_key;
    bool fail = false;
  };

  Outcome dispatch(const std::string& cmd, const std::string& rest, int line_no);
  const QuotientRing& ring(const std::string& name, int line_no) const;
  const QuotientRing& current(int line_no) const;
  SuperElement element(const std::string& text, const QuotientRing& R, int line_no) const;
  SamplerConfig sampler(int p) const;
  /// Throws when name is already bound; sessions are append-only.
  void claim(const std::string& name, int line_no) const;

  SessionConfig cfg_;
  std::map<std::string, QuotientRing> rings_;
  std::map<std::string, std::pair<std::string, SuperElement>> elements_;  // name -> (ring, value)
  std::map<std::string, Morphism> morphisms_;
  std::map<std::string, WeilSuperAlgebra> weils_;
  std::string current_;
  std::vector<PointSet> point_sets_;
  nlohmann::json entries_ = nlohmann::json::array();
  nlohmann::json results_ = nlohmann::json::object();
  int fails_ = 0;
  bool quit_ = false;
};

/// Runs a script; writes command output to `out` and diagnostics to `err`.
/// Returns 0 when every verdict passed, 1 on any FAIL, 2 on a script error.
int run_script(std::istream& in, Session& session, std::ostream& out, std::ostream& err);

/// Interactive loop: errors are echoed and the session state is kept.
void repl(std::istream& in, Session& session, std::ostream& out, bool prompt);

/// SVG scatter plot of the 1- and 2-dimensional point sets.
std::string points_svg(const std::vector<PointSet>& sets);

}  // namespace csr
