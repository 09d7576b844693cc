#include <unistd.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "csr/errors.hpp"
#include "csr/session.hpp"

namespace {

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  return static_cast<bool>(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"csr: computations in finitely presented C-infinity superrings"};
  csr::SessionConfig cfg;
  std::string script, json_out, svg_out, box;
  app.add_option("script", script, "Script file; omit for the interactive prompt");
  app.add_option("--tol-abs", cfg.tol.abs, "Absolute tolerance for vanishing")->check(CLI::PositiveNumber);
  app.add_option("--tol-rel", cfg.tol.rel, "Relative tolerance for sampled equality")->check(CLI::PositiveNumber);
  app.add_option("--jet-order", cfg.jet_order, "Jet order for localization")->check(CLI::Range(1, 16));
  app.add_option("--seed", cfg.seed, "Seed for every sampler");
  app.add_option("--box", box, "Sampling interval per axis, lo..hi");
  app.add_option("--grid", cfg.grid, "Grid points per axis for R-point search")->check(CLI::Range(1, 10000));
  app.add_option("--json-out", json_out, "Write the JSON report here");
  app.add_option("--svg-out", svg_out, "Write an SVG plot of computed R-points here");
  app.add_flag("--timing", cfg.timing, "Record elapsed_ms per command");
  CLI11_PARSE(app, argc, argv);

  if (!box.empty()) {
    auto dots = box.find("..");
    try {
      if (dots == std::string::npos) throw std::invalid_argument(box);
      double lo = std::stod(box.substr(0, dots)), hi = std::stod(box.substr(dots + 2));
      if (!(lo < hi)) throw std::invalid_argument(box);
      cfg.box = std::make_pair(lo, hi);
    } catch (const std::exception&) {
      std::cerr << "error: --box expects lo..hi with lo < hi\n";
      return 2;
    }
  }

  csr::Session session(cfg);
  int code = 0;
  if (script.empty()) {
    csr::repl(std::cin, session, std::cout, isatty(STDIN_FILENO) != 0);
  } else {
    std::ifstream in(script);
    if (!in) {
      std::cerr << "error: cannot open " << script << '\n';
      return 2;
    }
    code = csr::run_script(in, session, std::cout, std::cerr);
  }
  if (!json_out.empty() && !write_file(json_out, session.report().dump(2) + "\n")) {
    std::cerr << "error: cannot write " << json_out << '\n';
    return 2;
  }
  if (!svg_out.empty() && !write_file(svg_out, csr::points_svg(session.point_sets()))) {
    std::cerr << "error: cannot write " << svg_out << '\n';
    return 2;
  }
  return code;
}
