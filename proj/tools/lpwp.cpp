#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "lpwp/cli.hpp"

int main(int argc, char** argv) {
  using lpwp::cli::Command;
  lpwp::cli::CliConfig config;

  CLI::App app{"Scoring, parsing and solving for optimization word problems"};
  app.require_subcommand(1);

  std::string format = "span_json";
  std::string mode = "micro";
  std::string emit = "lp";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", config.out, "Write the report here instead of standard output");
    sub->add_flag("--json", config.json, "Emit a JSON record");
  };
  auto ir_input = [&](CLI::App* sub) {
    sub->add_option("--input", config.input, "IR file (one or more '### id' problems)");
    sub->add_option("--problem", config.problem, "Problem id to select from the IR file");
  };
  auto data_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Dataset format")->check(CLI::IsMember({"span_json", "conll_bio"}));
  };

  auto* score_ner = app.add_subcommand("score-ner", "Entity-level precision, recall and F1");
  score_ner->add_option("--gold", config.gold)->required();
  score_ner->add_option("--pred", config.pred)->required();
  data_format(score_ner);
  score_ner->add_option("--mode", mode, "Primary averaging mode")->check(CLI::IsMember({"micro", "macro"}));
  common(score_ner);

  auto* score_gen = app.add_subcommand("score-gen", "Declaration-level accuracy of IR formulations");
  score_gen->add_option("--gold", config.gold)->required();
  score_gen->add_option("--pred", config.pred)->required();
  score_gen->add_option("--tol", config.tol, "Coefficient tolerance");
  score_gen->add_flag("--normalize-scale", config.normalize_scale, "Divide declarations by their largest coefficient");
  common(score_gen);

  auto* parse_ir = app.add_subcommand("parse-ir", "Validate IR and print it normalized (or canonical with --json)");
  ir_input(parse_ir);
  parse_ir->get_option("--input")->required();
  common(parse_ir);

  auto* emit_lp = app.add_subcommand("emit-lp", "Write the LP or MPS model for one IR problem");
  ir_input(emit_lp);
  emit_lp->get_option("--input")->required();
  emit_lp->add_option("--emit", emit, "Model format")->check(CLI::IsMember({"lp", "mps"}));
  emit_lp->add_option("--out", config.out, "Write the model here instead of standard output");

  auto* solve = app.add_subcommand("solve", "Solve one IR problem with the simplex method");
  ir_input(solve);
  solve->get_option("--input")->required();
  solve->add_option("--feas-tol", config.feas_tol, "Phase-one feasibility tolerance");
  common(solve);

  auto* stats = app.add_subcommand("stats", "Sample counts per split and domain");
  stats->add_option("--data", config.data, "Dataset file or directory")->required();
  data_format(stats);
  common(stats);

  auto* pipeline = app.add_subcommand("pipeline", "IR to LP model to solution");
  ir_input(pipeline);
  pipeline->add_option("--data", config.data, "Gold-entity dataset the problem must appear in");
  data_format(pipeline);
  pipeline->add_option("--emit", emit, "Model format")->check(CLI::IsMember({"lp", "mps"}));
  pipeline->add_option("--lp-out", config.lp_out, "Also write the model to this file");
  pipeline->add_option("--feas-tol", config.feas_tol, "Phase-one feasibility tolerance");
  common(pipeline);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lpwp::cli::kExitInputError;
  }

  const std::map<CLI::App*, Command> commands{{score_ner, Command::score_ner}, {score_gen, Command::score_gen},
                                              {parse_ir, Command::parse_ir},   {emit_lp, Command::emit_lp},
                                              {solve, Command::solve},         {stats, Command::stats},
                                              {pipeline, Command::pipeline}};
  config.format = *lpwp::dataset_format_from_string(format);
  config.mode = *lpwp::averaging_mode_from_string(mode);
  config.emit = emit == "mps" ? lpwp::cli::EmitFormat::mps : lpwp::cli::EmitFormat::lp;
  config.command = commands.at(app.get_subcommands().front());
  if (const char* lexicon = std::getenv("LPWP_LEXICON"); lexicon && *lexicon) config.lexicon_path = lexicon;

  return lpwp::cli::run(config, std::cout, std::cerr);
}
