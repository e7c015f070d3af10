#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sburgers/commands.hpp"
#include "sburgers/error.hpp"

namespace {

// Remaining "--key value" / "--key=value" tokens become config overrides.
std::vector<std::pair<std::string, std::string>> parse_overrides(const std::vector<std::string>& extras) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& tok = extras[i];
    if (tok.rfind("--", 0) != 0 || tok.size() <= 2) {
      throw sburgers::UsageError(tok, "unexpected argument '" + tok + "'");
    }
    const std::string body = tok.substr(2);
    const auto eq = body.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(body.substr(0, eq), body.substr(eq + 1));
    } else if (i + 1 < extras.size()) {
      out.emplace_back(body, extras[++i]);
    } else {
      throw sburgers::UsageError(body, "option '--" + body + "' needs a value");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Burgers, enhanced-noise and paracontrolled resolvent experiments"};
  app.require_subcommand(1);

  sburgers::CommonOptions options;
  std::string config_path;
  for (const auto& name : sburgers::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->allow_extras();
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--seed", options.seed, "base seed");
    sub->add_option("--out", options.out, "output directory");
    sub->add_option("--threads", options.threads, "worker threads");
    sub->footer("Any config key may also be given as --key value.");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sburgers::kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!config_path.empty()) options.config_path = config_path;
    options.overrides = parse_overrides(sub->remaining());
    return sburgers::run_command(sub->get_name(), options, std::cout);
  } catch (const sburgers::UsageError& e) {
    std::cerr << "usage error [" << e.key() << "]: " << e.what() << '\n';
    return sburgers::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sburgers::kExitCheckFailed;
  }
}
