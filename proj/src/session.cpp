#include "csr/session.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>

#include "csr/cinfty.hpp"
#include "csr/errors.hpp"

namespace csr {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

// Splits at sep outside (), [] nesting.
std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

bool is_identifier(const std::string& s) {
  static const std::regex id(R"([A-Za-z_][A-Za-z0-9_]*)");
  return std::regex_match(s, id);
}

const char* prov(Provenance p) { return p == Provenance::Exact ? "exact" : "sampled"; }

// Trailing key=value options; returns the remaining text.
std::string take_options(const std::string& rest, std::map<std::string, std::string>& opts) {
  std::vector<std::string> words;
  std::istringstream ss(rest);
  for (std::string w; ss >> w;) words.push_back(w);
  while (!words.empty()) {
    auto eq = words.back().find('=');
    if (eq == std::string::npos || eq == 0 || words.back().find("==") != std::string::npos) break;
    std::string key = words.back().substr(0, eq);
    if (!is_identifier(key)) break;
    opts[key] = words.back().substr(eq + 1);
    words.pop_back();
  }
  std::string out;
  for (const auto& w : words) out += (out.empty() ? "" : " ") + w;
  return out;
}

double to_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ScriptError("expected a number, got '" + s + "'", line);
  }
}

int to_int(const std::string& s, int line) {
  double v = to_double(s, line);
  if (v != std::floor(v)) throw ScriptError("expected an integer, got '" + s + "'", line);
  return static_cast<int>(v);
}

std::pair<double, double> parse_interval(const std::string& s, int line) {
  auto dots = s.find("..");
  if (dots == std::string::npos) throw ScriptError("expected an interval lo..hi, got '" + s + "'", line);
  double lo = to_double(s.substr(0, dots), line), hi = to_double(s.substr(dots + 2), line);
  if (!(lo < hi)) throw ScriptError("empty interval '" + s + "'", line);
  return {lo, hi};
}

json point_json(const Point& x) {
  json a = json::array();
  for (double v : x) a.push_back(v == 0.0 ? 0.0 : v);
  return a;
}

json points_json(const std::vector<Point>& pts) {
  json a = json::array();
  for (const auto& x : pts) a.push_back(point_json(x));
  return a;
}

bool is_unary_function(const std::string& f) {
  static const char* names[] = {"exp", "log", "sin", "cos", "tan", "sqrt", "flat"};
  return std::any_of(std::begin(names), std::end(names), [&](const char* n) { return f == n; });
}


}  // namespace

Session::Session(SessionConfig cfg) : cfg_(std::move(cfg)) {}

SamplerConfig Session::sampler(int p) const {
  SamplerConfig s;
  if (cfg_.box) s.box = Box::cube(p, cfg_.box->first, cfg_.box->second);
  s.grid = cfg_.grid;
  s.seed = cfg_.seed;
  return s;
}

void Session::claim(const std::string& name, int line_no) const {
  if (rings_.count(name) || elements_.count(name) || morphisms_.count(name) || weils_.count(name)) {
    throw ScriptError("'" + name + "' is already defined", line_no);
  }
}

const QuotientRing& Session::ring(const std::string& name, int line_no) const {
  auto it = rings_.find(name);
  if (it == rings_.end()) throw ScriptError("undefined ring '" + name + "'", line_no);
  return it->second;
}

const QuotientRing& Session::current(int line_no) const {
  if (current_.empty()) throw ScriptError("no ring defined yet", line_no);
  return ring(current_, line_no);
}

SuperElement Session::element(const std::string& text, const QuotientRing& R, int line_no) const {
  auto it = elements_.find(text);
  if (it != elements_.end()) {
    const SuperElement& e = it->second.second;
    if (e.p() != R.p() || e.q() != R.q()) {
      throw ScriptError("element '" + text + "' belongs to ring " + it->second.first, line_no);
    }
    return e;
  }
  if (text.empty()) throw ScriptError("missing element", line_no);
  // Named elements inside a larger expression are spliced in textually.
  static const std::regex ident(R"([A-Za-z_][A-Za-z0-9_]*)");
  std::string expanded;
  auto last = text.cbegin();
  for (std::sregex_iterator m(text.begin(), text.end(), ident), end; m != end; ++m) {
    auto named = elements_.find(m->str());
    if (named == elements_.end()) continue;
    const SuperElement& e = named->second.second;
    if (e.p() != R.p() || e.q() != R.q()) {
      throw ScriptError("element '" + m->str() + "' belongs to ring " + named->second.first, line_no);
    }
    expanded.append(last, text.cbegin() + m->position());
    expanded += "(" + e.to_string() + ")";
    last = text.cbegin() + m->position() + m->length();
  }
  expanded.append(last, text.cend());
  return R.element(expanded);
}

std::vector<std::string> Session::execute(std::string_view line, int line_no) {
  std::vector<std::string> shown;
  if (trim(line).rfind('#', 0) == 0) return shown;
  for (const std::string& raw : split_top(line, ';')) {
    std::string cmd_text = trim(raw);
    if (cmd_text.empty() || cmd_text[0] == '#') continue;
    auto sp = cmd_text.find_first_of(" \t");
    std::string cmd = cmd_text.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(cmd_text.substr(sp));
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = dispatch(cmd, rest, line_no);
    } catch (const ScriptError&) {
      throw;
    } catch (const Error& e) {
      throw ScriptError(e.what(), line_no);
    }
    if (quit_) break;
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    json entry = {{"command", cmd_text},
                  {"inputs", o.inputs},
                  {"verdict", o.verdict},
                  {"provenance", o.provenance ? json(prov(*o.provenance)) : json(nullptr)},
                  {"witnesses", o.witnesses},
                  {"elapsed_ms", cfg_.timing ? json(ms) : json(nullptr)}};
    if (o.provenance) {
      entry["tolerances"] = {{"abs", cfg_.tol.abs}, {"rel", cfg_.tol.rel}};
    }
    entries_.push_back(std::move(entry));
    if (o.result_key) results_[*o.result_key] = o.display;
    if (o.fail) ++fails_;
    shown.push_back(o.display);
  }
  return shown;
}

Session::Outcome Session::dispatch(const std::string& cmd, const std::string& rest, int L) {
  Outcome o;
  if (cmd == "quit" || cmd == "exit") {
    quit_ = true;
    return o;
  }
  if (cmd == "ring") {
    static const std::regex re(R"(([A-Za-z_]\w*)\s*=\s*C\(\s*(\d+)\s*\|\s*(\d+)\s*\)\s*(?:/\s*\((.*)\))?\s*)");
    std::smatch m;
    if (!std::regex_match(rest, m, re)) throw ScriptError("usage: ring NAME = C(p|q) [/ (g1, g2, ...)]", L);
    int p = std::stoi(m[2]), q = std::stoi(m[3]);
    std::vector<SuperElement> gens;
    if (m[4].matched && !trim(m[4].str()).empty()) {
      for (const auto& g : split_top(m[4].str(), ',')) gens.push_back(parse_element(g, p, q));
    }
    QuotientRing R{SuperIdeal(p, q, gens)};
    std::string name = m[1];
    claim(name, L);
    rings_.emplace(name, R);
    current_ = name;
    o.display = name + " = " + R.to_string();
    o.verdict = "defined";
    o.inputs = {{"name", name}, {"p", p}, {"q", q}};
    return o;
  }
  if (cmd == "use") {
    ring(rest, L);
    current_ = rest;
    o.display = "using " + rest;
    o.verdict = "defined";
    return o;
  }
  if (cmd == "elem") {
    auto eq = rest.find('=');
    std::string name = trim(rest.substr(0, eq));
    if (eq == std::string::npos || !is_identifier(name)) throw ScriptError("usage: elem NAME = EXPR", L);
    static const std::regex reserved(R"([xt]\d+|exp|log|sin|cos|tan|sqrt|flat|bump)");
    if (std::regex_match(name, reserved)) throw ScriptError("'" + name + "' is a reserved name", L);
    const QuotientRing& R = current(L);
    SuperElement e = element(trim(rest.substr(eq + 1)), R, L);
    claim(name, L);
    elements_.emplace(name, std::make_pair(current_, e));
    o.display = name + " = " + e.to_string();
    o.verdict = "defined";
    o.inputs = {{"ring", current_}, {"name", name}};
    return o;
  }
  if (cmd == "show" || cmd == "nf") {
    const QuotientRing& R = current(L);
    SuperElement e = R.normal_form(element(rest, R, L));
    o.display = e.to_string();
    o.verdict = "normal form";
    o.provenance = Provenance::Exact;
    o.inputs = {{"ring", current_}, {"element", rest}};
    if (cmd == "nf") o.result_key = rest;
    return o;
  }
  if (cmd == "apply") {
    std::istringstream ss(rest);
    std::string fn;
    ss >> fn;
    std::vector<std::string> args;
    for (std::string a; ss >> a;) args.push_back(a);
    if (fn.empty() || args.empty()) throw ScriptError("usage: apply FUNCTION ARG...", L);
    const QuotientRing& R = current(L);
    SmoothExpr h = is_unary_function(fn) ? parse_expr(fn + "(x1)", 1) : parse_expr(fn, static_cast<int>(args.size()));
    std::vector<SuperElement> xs;
    for (const auto& a : args) xs.push_back(element(a, R, L));
    o.display = R.normal_form(apply_smooth(h, xs)).to_string();
    o.verdict = "value";
    o.provenance = Provenance::Exact;
    o.inputs = {{"ring", current_}, {"function", fn}, {"args", args}};
    o.result_key = "apply " + rest;
    return o;
  }
  if (cmd == "equal") {
    auto sides = rest.find("==");
    if (sides == std::string::npos) throw ScriptError("usage: equal A == B", L);
    const QuotientRing& R = current(L);
    SuperElement a = R.normal_form(element(trim(rest.substr(0, sides)), R, L));
    SuperElement b = R.normal_form(element(trim(rest.substr(sides + 2)), R, L));
    EqualityVerdict v = super_equal(a, b, cfg_.seed, 20, cfg_.tol.rel);
    o.display = v.equal ? "equal" : "different";
    o.verdict = o.display;
    o.provenance = v.provenance;
    if (v.witness) o.witnesses.push_back(point_json(*v.witness));
    o.inputs = {{"ring", current_}, {"lhs", trim(rest.substr(0, sides))}, {"rhs", trim(rest.substr(sides + 2))}};
    o.result_key = "equal " + rest;
    return o;
  }
  if (cmd == "split" || cmd == "superreduced" || cmd == "graded" || cmd == "evenpart" || cmd == "reduced") {
    std::string name = rest.empty() ? current_ : rest;
    const QuotientRing& R = ring(name.empty() ? std::string("?") : name, L);
    o.inputs = {{"ring", name}};
    o.result_key = rest.empty() ? cmd : cmd + " " + rest;
    if (cmd == "split") {
      SplitVerdict v = is_split(R);
      o.display = to_string(v.kind);
      o.verdict = o.display;
      o.provenance = v.provenance;
      if (!v.section.empty()) o.witnesses.push_back({{"section", v.section}});
      if (v.obstruction) {
        o.witnesses.push_back({{"order_in_reduced", v.obstruction->first}, {"order_in_even_part", v.obstruction->second}});
      }
    } else if (cmd == "superreduced") {
      SuperreducedVerdict v = is_cinfty_superreduced(R, sampler(R.p()));
      o.display = to_string(v.kind);
      o.verdict = o.display;
      o.provenance = v.provenance;
      if (v.witness) o.witnesses.push_back({{"element", v.witness->to_string()}});
      if (v.point) o.witnesses.push_back({{"point", point_json(*v.point)}});
    } else if (cmd == "graded") {
      o.display = associated_graded(R).to_string();
      o.verdict = "presentation";
      o.provenance = Provenance::Exact;
    } else if (cmd == "reduced") {
      o.display = superreduction(R).to_string();
      o.verdict = "presentation";
      o.provenance = Provenance::Exact;
    } else {
      auto ev = even_part_presentation(R);
      o.display = ev ? ev->to_string() : "Unknown";
      o.verdict = ev ? "presentation" : "Unknown";
      o.provenance = Provenance::Exact;
    }
    return o;
  }
  if (cmd == "radical" || cmd == "psi") {
    const QuotientRing& R = current(L);
    SuperElement e = element(rest, R, L);
    o.inputs = {{"ring", current_}, {"element", rest}};
    o.result_key = cmd + " " + rest;
    if (cmd == "radical") {
      RadicalVerdict v = radical_membership(e, R, sampler(R.p()));
      o.display = to_string(v.kind);
      o.provenance = v.provenance;
      if (v.witness) o.witnesses.push_back(point_json(*v.witness));
    } else {
      PsiVerdict v = psi_kernel_test(e, R, sampler(R.p()), cfg_.jet_order);
      o.display = to_string(v.kind);
      o.provenance = v.provenance;
      if (v.witness) o.witnesses.push_back({{"point", point_json(*v.witness)}, {"jet", v.local->to_string()}});
    }
    o.verdict = o.display;
    return o;
  }
  if (cmd == "points") {
    std::map<std::string, std::string> opts;
    std::string name = take_options(rest, opts);
    if (name.empty()) name = current_;
    const QuotientRing& R = ring(name.empty() ? std::string("?") : name, L);
    SamplerConfig s = sampler(R.p());
    for (const auto& [k, v] : opts) {
      if (k == "box") {
        auto [lo, hi] = parse_interval(v, L);
        s.box = Box::cube(R.p(), lo, hi);
      } else if (k == "grid") {
        s.grid = to_int(v, L);
        if (s.grid < 1) throw ScriptError("grid must be positive", L);
      } else {
        throw ScriptError("unknown option '" + k + "' for points", L);
      }
    }
    ZeroSet zs = find_rpoints(R, s);
    json pts = points_json(zs.points);
    o.display = pts.dump();
    o.verdict = zs.empty_exact ? "empty" : (zs.whole_space ? "whole space" : "sampled");
    o.provenance = zs.empty_exact ? Provenance::Exact : Provenance::Sampled;
    o.witnesses = pts;
    o.inputs = {{"ring", name}, {"grid", s.grid}, {"box", {effective_box(s, R.p()).lo, effective_box(s, R.p()).hi}}};
    o.result_key = "points " + name;
    point_sets_.push_back({"points " + name, R.p(), zs.points});
    return o;
  }
  if (cmd == "localize") {
    std::map<std::string, std::string> opts;
    std::string expr = take_options(rest, opts);
    const QuotientRing& R = current(L);
    if (!opts.count("at")) throw ScriptError("usage: localize EXPR at=a1,a2,... [order=k]", L);
    Point x;
    for (const auto& c : split_top(opts["at"], ',')) x.push_back(to_double(c, L));
    int order = opts.count("order") ? to_int(opts["order"], L) : cfg_.jet_order;
    LocalElement le = localize(R.normal_form(element(expr, R, L)), x, order);
    o.display = le.to_string();
    o.verdict = "jet";
    o.provenance = le.exact() ? Provenance::Exact : Provenance::Sampled;
    o.inputs = {{"ring", current_}, {"element", expr}, {"point", point_json(x)}, {"order", order}};
    o.result_key = "localize " + rest;
    return o;
  }
  if (cmd == "fair") {
    const QuotientRing& R = current(L);
    std::vector<SuperElement> probes;
    std::vector<std::string> texts = split_top(rest, ',');
    for (const auto& t : texts) probes.push_back(element(t, R, L));
    FairficationReport rep = fairfication(R, probes, sampler(R.p()), cfg_.jet_order);
    bool sampled = false;
    json killed = json::array();
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
      const auto& e = rep.entries[i];
      sampled = sampled || e.verdict.provenance == Provenance::Sampled;
      if (e.killed) killed.push_back(texts[i]);
    }
    o.display = rep.fair() ? "fair" : "not fair: kill " + killed.dump();
    o.verdict = rep.fair() ? "fair" : "not fair";
    o.provenance = sampled ? Provenance::Sampled : Provenance::Exact;
    o.witnesses = killed;
    o.inputs = {{"ring", current_}, {"probes", texts}};
    o.result_key = "fair " + rest;
    return o;
  }
  if (cmd == "morphism") {
    static const std::regex re(R"(([A-Za-z_]\w*)\s*:\s*([A-Za-z_]\w*)\s*->\s*([A-Za-z_]\w*)\s*=\s*\[(.*)\]\s*)");
    std::smatch m;
    if (!std::regex_match(rest, m, re)) throw ScriptError("usage: morphism NAME : R -> S = [x1 -> e, t1 -> e]", L);
    const QuotientRing& A = ring(m[2], L);
    const QuotientRing& B = ring(m[3], L);
    std::vector<std::optional<SuperElement>> ev(static_cast<std::size_t>(A.p())), od(static_cast<std::size_t>(A.q()));
    for (const auto& item : split_top(m[4].str(), ',')) {
      auto arrow = item.find("->");
      if (arrow == std::string::npos) throw ScriptError("expected 'generator -> image', got '" + item + "'", L);
      std::string gen = trim(item.substr(0, arrow));
      SuperElement img = element(trim(item.substr(arrow + 2)), B, L);
      static const std::regex g(R"(([xt])(\d+))");
      std::smatch gm;
      if (!std::regex_match(gen, gm, g)) throw ScriptError("unknown generator '" + gen + "'", L);
      int idx = std::stoi(gm[2]);
      auto& slot = gm[1] == "x" ? ev : od;
      if (idx < 1 || idx > static_cast<int>(slot.size())) throw ScriptError("generator " + gen + " out of range", L);
      slot[static_cast<std::size_t>(idx - 1)] = img;
    }
    std::vector<SuperElement> even, odd;
    for (std::size_t i = 0; i < ev.size(); ++i) {
      if (!ev[i]) throw ScriptError("missing image of x" + std::to_string(i + 1), L);
      even.push_back(*ev[i]);
    }
    for (std::size_t j = 0; j < od.size(); ++j) {
      if (!od[j]) throw ScriptError("missing image of t" + std::to_string(j + 1), L);
      odd.push_back(*od[j]);
    }
    o.inputs = {{"name", m[1]}, {"domain", m[2]}, {"codomain", m[3]}};
    claim(m[1], L);
    try {
      Morphism f(A, B, even, odd, cfg_.seed);
      morphisms_.emplace(m[1], f);
      o.display = m[1].str() + " = [" + f.to_string() + "]";
      o.verdict = "defined";
      o.provenance = f.well_formedness();
    } catch (const IllFormedMorphism& e) {
      o.display = std::string("FAIL: ") + e.what();
      o.verdict = "FAIL";
      o.fail = true;
    }
    return o;
  }
  if (cmd == "map") {
    std::istringstream ss(rest);
    std::string name;
    ss >> name;
    auto it = morphisms_.find(name);
    if (it == morphisms_.end()) throw ScriptError("undefined morphism '" + name + "'", L);
    std::string expr = trim(rest.substr(name.size()));
    o.display = it->second.apply(element(expr, it->second.domain(), L)).to_string();
    o.verdict = "value";
    o.provenance = it->second.well_formedness();
    o.inputs = {{"morphism", name}, {"element", expr}};
    o.result_key = "map " + rest;
    return o;
  }
  if (cmd == "axioms") {
    std::map<std::string, std::string> opts;
    std::string dims = take_options(rest, opts);
    std::istringstream ss(dims);
    int p = -1, q = -1;
    std::string mode;
    ss >> p >> q >> mode;
    if (p < 0 || q < 0 || (!mode.empty() && mode != "first-order")) {
      throw ScriptError("usage: axioms p q [first-order] [trials=N]", L);
    }
    int trials = opts.count("trials") ? to_int(opts["trials"], L) : 50;
    TaylorOrder order = mode.empty() ? TaylorOrder::Full : TaylorOrder::FirstOrder;
    AxiomReport proj = check_projection_axiom({p, q}, trials, cfg_.seed, order);
    AxiomReport comp = check_composition_axiom({p, q}, trials, cfg_.seed, order);
    bool ok = proj.ok() && comp.ok();
    o.display = std::string(ok ? "PASS" : "FAIL") + " projection " + std::to_string(proj.passed) + "/" +
                std::to_string(proj.trials) + ", composition " + std::to_string(comp.passed) + "/" +
                std::to_string(comp.trials);
    o.verdict = ok ? "PASS" : "FAIL";
    o.fail = !ok;
    o.provenance = proj.sampled + comp.sampled > 0 ? Provenance::Sampled : Provenance::Exact;
    for (const auto* r : {&proj, &comp}) {
      for (const auto& f : r->failures) {
        json w = {{"axiom", r->axiom}, {"trial", f.trial}, {"description", f.description}};
        if (f.witness) w["point"] = point_json(*f.witness);
        o.witnesses.push_back(w);
      }
    }
    o.inputs = {{"p", p}, {"q", q}, {"trials", trials}, {"taylor", mode.empty() ? "full" : "first-order"}};
    o.result_key = "axioms " + rest;
    return o;
  }
  if (cmd == "weil") {
    static const std::regex re(R"(([A-Za-z_]\w*)\s*=\s*R\[\s*(\d+)\s*\]\s*(?:/\s*\((.*)\))?\s*)");
    std::smatch m;
    if (!std::regex_match(rest, m, re)) throw ScriptError("usage: weil NAME = R[q] [/ (r1, r2, ...)]", L);
    int q = std::stoi(m[2]);
    std::vector<SuperElement> rels;
    if (m[3].matched && !trim(m[3].str()).empty()) {
      for (const auto& r : split_top(m[3].str(), ',')) rels.push_back(parse_element(r, 0, q));
    }
    WeilSuperAlgebra W(q, rels);
    claim(m[1], L);
    weils_.emplace(m[1], W);
    o.display = m[1].str() + " = " + W.to_string() + ", dimension " + std::to_string(W.dimension());
    o.verdict = "defined";
    o.provenance = Provenance::Exact;
    o.inputs = {{"name", m[1]}, {"q", q}};
    return o;
  }
  if (cmd == "wapply") {
    std::istringstream ss(rest);
    std::string name, fn;
    ss >> name >> fn;
    auto it = weils_.find(name);
    if (it == weils_.end()) throw ScriptError("undefined Weil superalgebra '" + name + "'", L);
    std::vector<SuperElement> args;
    for (std::string a; ss >> a;) args.push_back(it->second.element(a));
    if (args.empty()) throw ScriptError("usage: wapply W FUNCTION ARG...", L);
    SmoothExpr h = is_unary_function(fn) ? parse_expr(fn + "(x1)", 1) : parse_expr(fn, static_cast<int>(args.size()));
    o.display = weil_apply(h, args, it->second).to_string();
    o.verdict = "value";
    o.provenance = Provenance::Exact;
    o.inputs = {{"algebra", name}, {"function", fn}};
    o.result_key = "wapply " + rest;
    return o;
  }
  if (cmd == "expect") {
    auto arrow = rest.rfind("=>");
    if (arrow == std::string::npos) throw ScriptError("usage: expect COMMAND => VALUE", L);
    std::string inner = trim(rest.substr(0, arrow)), want = trim(rest.substr(arrow + 2));
    auto sp = inner.find_first_of(" \t");
    Outcome got = dispatch(inner.substr(0, sp), sp == std::string::npos ? "" : trim(inner.substr(sp)), L);
    bool pass = got.display == want;
    o.display = std::string(pass ? "PASS" : "FAIL") + " " + inner + " => " + got.display;
    o.verdict = pass ? "PASS" : "FAIL";
    o.fail = !pass;
    o.provenance = got.provenance;
    o.witnesses = got.witnesses;
    o.inputs = {{"command", inner}, {"expected", want}, {"actual", got.display}};
    if (got.result_key) results_[*got.result_key] = got.display;
    return o;
  }
  throw ScriptError("unknown command '" + cmd + "'", L);
}

json Session::report() const {
  json cfg = {{"seed", cfg_.seed},
              {"tol_abs", cfg_.tol.abs},
              {"tol_rel", cfg_.tol.rel},
              {"jet_order", cfg_.jet_order},
              {"grid", cfg_.grid},
              {"box", cfg_.box ? json::array({cfg_.box->first, cfg_.box->second}) : json(nullptr)}};
  return {{"config", cfg}, {"entries", entries_}, {"results", results_}, {"status", fails_ ? "FAIL" : "PASS"}};
}

int run_script(std::istream& in, Session& session, std::ostream& out, std::ostream& err) {
  std::string line;
  int line_no = 0;
  while (!session.quit_requested() && std::getline(in, line)) {
    ++line_no;
    try {
      for (const auto& s : session.execute(line, line_no)) out << s << '\n';
    } catch (const ScriptError& e) {
      err << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return session.any_fail() ? 1 : 0;
}

void repl(std::istream& in, Session& session, std::ostream& out, bool prompt) {
  std::string line;
  int line_no = 0;
  while (!session.quit_requested()) {
    if (prompt) out << "csr> " << std::flush;
    if (!std::getline(in, line)) break;
    ++line_no;
    try {
      for (const auto& s : session.execute(line, line_no)) out << s << '\n';
    } catch (const ScriptError& e) {
      out << "error: " << e.what() << '\n';
    }
  }
}

std::string points_svg(const std::vector<PointSet>& sets) {
  const double size = 400, pad = 20;
  double lo = -1, hi = 1;
  for (const auto& s : sets) {
    for (const auto& x : s.points) {
      for (double v : x) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  auto map = [&](double v) { return pad + (v - lo) / (hi - lo) * (size - 2 * pad); };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::size_t k = 0;
  for (const auto& s : sets) {
    if (s.p < 1 || s.p > 2) continue;
    const char* c = colors[k++ % 4];
    svg << "  <g fill=\"" << c << "\"><title>" << s.label << "</title>\n";
    for (const auto& x : s.points) {
      double cx = map(x[0]), cy = s.p == 2 ? size - map(x[1]) : size / 2;
      svg << "    <circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"2\"/>\n";
    }
    svg << "  </g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace csr
