// odms: synthetic object-depth datasets, VOS-DE baseline and evaluation.
//
//   odms gen     --count N --n N --seed S --out DIR [--perturb]
//   odms perturb --data DIR --out DIR --seed S
//   odms vosde   --data DIR --n-used K --pred out.tsv [--summary s.csv] [--no-cap]
//   odms eval    --data DIR --pred in.tsv [--summary s.csv] [--no-cap]
//   odms tables  --row METHOD=a.csv,b.csv ... [--sets A,B,..] [--out t.csv]
//
// ODMS_WORKERS sets the number of worker threads.

#include <iostream>

#include <CLI11.hpp>

#include "odms/commands.hpp"

int main(int argc, char** argv) {
  using namespace odms::cli;

  CLI::App app{"Object depth from camera motion and segmentation masks"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset");
  gen_cmd->add_option("--count", gen.count, "Number of examples")->required();
  gen_cmd->add_option("--n", gen.n_obs, "Observations per example")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_flag("--perturb", gen.perturb, "Apply random dilation/erosion to every mask");
  gen_cmd->add_option("--set-name", gen.set_name, "Set name recorded in the manifest")->capture_default_str();
  gen_cmd->add_option("--d-min", gen.d_min, "Minimum object depth (m)");
  gen_cmd->add_option("--d-max", gen.d_max, "Maximum object depth (m)");
  gen_cmd->add_option("--dz-min", gen.delta_z_min, "Minimum camera move range (m)");
  gen_cmd->add_option("--height", gen.height, "Mask height (px)");
  gen_cmd->add_option("--width", gen.width, "Mask width (px)");

  PerturbOptions perturb;
  auto* perturb_cmd = app.add_subcommand("perturb", "Perturb every mask of an existing dataset");
  perturb_cmd->add_option("--data", perturb.data, "Input dataset directory")->required();
  perturb_cmd->add_option("--out", perturb.out, "Output directory")->required();
  perturb_cmd->add_option("--seed", perturb.seed, "Random seed")->capture_default_str();
  perturb_cmd->add_option("--set-name", perturb.set_name, "Set name (default: <input>-perturb)");

  VosdeOptions vosde;
  auto* vosde_cmd = app.add_subcommand("vosde", "Run the least-squares VOS-DE baseline");
  vosde_cmd->add_option("--data", vosde.data, "Dataset directory")->required();
  vosde_cmd->add_option("--n-used", vosde.n_used, "Observations used per example")->capture_default_str();
  vosde_cmd->add_option("--pred", vosde.pred, "Prediction file to write (TSV)")->required();
  vosde_cmd->add_option("--summary", vosde.summary, "Also write the summary CSV here");
  vosde_cmd->add_flag("--no-cap", vosde.no_cap, "Exclude failed solves instead of scoring them 100%");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score a prediction file against a dataset");
  eval_cmd->add_option("--data", eval.data, "Dataset directory")->required();
  eval_cmd->add_option("--pred", eval.pred, "Prediction file (TSV)")->required();
  eval_cmd->add_option("--summary", eval.summary, "Also write the summary CSV here");
  eval_cmd->add_flag("--no-cap", eval.no_cap, "Exclude failed predictions instead of scoring them 100%");

  TablesOptions tables;
  auto* tables_cmd = app.add_subcommand("tables", "Merge summary CSVs into a method x set table");
  tables_cmd->add_option("--row", tables.rows, "METHOD=summary.csv[,summary.csv...]")->required();
  tables_cmd->add_option("--sets", tables.sets, "Set columns in order")->delimiter(',')->capture_default_str();
  tables_cmd->add_option("--out", tables.out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (*gen_cmd) return cmd_gen(gen);
  if (*perturb_cmd) return cmd_perturb(perturb);
  if (*vosde_cmd) return cmd_vosde(vosde);
  if (*eval_cmd) return cmd_eval(eval);
  if (*tables_cmd) return cmd_tables(tables);
  return kUsage;
}
