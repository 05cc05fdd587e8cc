#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "crnf/errors.hpp"
#include "crnf/io.hpp"

namespace {

struct RawParams {
  std::string a = "0";
  std::string lambda_re = "1";
  std::string lambda_im = "0";
  std::string s = "0";
};

void add_common_flags(CLI::App* sub, crnf::JobConfig& cfg, RawParams& raw,
                      bool needs_input) {
  auto* input = sub->add_option("--input", cfg.input_path,
                                "Input JSON file (hypersurface or free data)");
  if (needs_input) input->required();
  sub->add_option("--out", cfg.output_path,
                  "Write the machine-readable JSON report here");
  sub->add_option("--weight", cfg.weight_cap,
                  "Weighted-degree cap of the report (>= 3)");
  sub->add_option("--zeta-cap", cfg.zeta_cap,
                  "Cap on the total degree in (zeta, zetabar) (>= 0)");
  sub->add_option("--param-a", raw.a,
                  "Chain direction a, an exact complex rational like \"1/2+3i\"");
  sub->add_option("--param-lambda-re", raw.lambda_re,
                  "Real part of the scaling parameter lambda (rational)");
  sub->add_option("--param-lambda-im", raw.lambda_im,
                  "Imaginary part of the scaling parameter lambda (rational)");
  sub->add_option("--param-s", raw.s,
                  "Chain parameterization shift s (rational)");
  sub->add_option("--seed", cfg.seed,
                  "Reserved for batch property drivers; ignored");
  sub->add_flag("--quiet", cfg.quiet, "Suppress the stdout summary");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "crnf: exact normal forms for everywhere 2-nondegenerate real "
      "hypersurfaces in C^3"};
  app.require_subcommand(1);

  crnf::JobConfig cfg;
  RawParams raw;

  CLI::App* normalize = app.add_subcommand(
      "normalize",
      "Compute the complete normal form and the normalizing map");
  CLI::App* sphericity = app.add_subcommand(
      "sphericity",
      "Decide equivalence to the model (tube over the light cone)");
  CLI::App* reconstruct = app.add_subcommand(
      "reconstruct",
      "Rebuild the normal-form surface from its distinguished free data");
  CLI::App* verify = app.add_subcommand(
      "verify",
      "Check reality, normal-form shape, Levi residual and 2-nondegeneracy");
  CLI::App* algebra = app.add_subcommand(
      "algebra-check",
      "Self-check the model's symmetry algebra (dims, grading, tangency)");

  add_common_flags(normalize, cfg, raw, true);
  add_common_flags(sphericity, cfg, raw, true);
  add_common_flags(reconstruct, cfg, raw, true);
  add_common_flags(verify, cfg, raw, true);
  add_common_flags(algebra, cfg, raw, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  if (normalize->parsed()) cfg.command = crnf::JobConfig::Command::normalize;
  else if (sphericity->parsed()) cfg.command = crnf::JobConfig::Command::sphericity;
  else if (reconstruct->parsed()) cfg.command = crnf::JobConfig::Command::reconstruct;
  else if (verify->parsed()) cfg.command = crnf::JobConfig::Command::verify;
  else cfg.command = crnf::JobConfig::Command::algebra_check;

  try {
    cfg.params.a = crnf::gaussq_parse(raw.a);
    cfg.params.lambda =
        crnf::GaussQ(crnf::rat_parse(raw.lambda_re), crnf::rat_parse(raw.lambda_im));
    cfg.params.s = crnf::rat_parse(raw.s);
    return crnf::run(cfg);
  } catch (const crnf::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const crnf::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const crnf::SolveError& e) {
    std::cerr << "solve error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
