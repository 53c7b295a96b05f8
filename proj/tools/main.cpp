#include "cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace mvp::cli;
  CLI::App app{"mvp: massless Vlasov-Poisson toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  app.add_option("--config", config_path, "Configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (must exist)");

  std::string family;
  std::vector<int> ps;
  std::vector<double> times;
  double tolerance = 0.0;
  int nodes = 0;
  for (const auto& m : modes()) {
    auto* sub = app.add_subcommand(m);
    if (m == "inequality") {
      sub->add_option("--family", family, "Test family name");
      sub->add_option("--p", ps, "Decay powers")->delimiter(',');
      sub->add_option("--times", times, "Times")->delimiter(',');
      sub->add_option("--tolerance", tolerance, "Quadrature tolerance");
      sub->add_option("--nodes", nodes, "Gauss nodes per dimension");
    }
    if (m == "free-stream") sub->add_option("--times", times, "Times")->delimiter(',');
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kIoError;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = parse_config(config_path);
    cfg.mode = app.get_subcommands().front()->get_name();
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!family.empty()) cfg.inequality.family = family;
    if (!ps.empty()) cfg.inequality.p = ps;
    if (!times.empty()) {
      if (cfg.mode == "inequality") cfg.inequality.times = times;
      else cfg.free_stream.times = times;
    }
    if (tolerance != 0.0) cfg.inequality.tolerance = tolerance;
    if (nodes != 0) cfg.inequality.nodes = nodes;
    validate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kIoError;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  }
  try {
    return dispatch(cfg, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
}
