// Copyright 2026 The GreenStore Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// greenstore: archive images in shrunken form, restore them on demand, and
// report quality, storage and energy figures.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "greenstore/archive.hpp"
#include "greenstore/energy.hpp"
#include "greenstore/error.hpp"
#include "greenstore/png.hpp"
#include "greenstore/report.hpp"

namespace fs = std::filesystem;
using namespace greenstore;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitBackend = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig: return kExitUsage;
    case ErrorCode::BackendFailure: return kExitBackend;
    default: return kExitData;
  }
}

struct Options {
  std::string store = "greenstore-data";
  std::vector<double> dither = {1.0};
  std::size_t palette_size = 256;
  std::string backend = "native";
  double carbon_factor = kDefaultCarbonGramsPerKwh;
  std::string tb_mode = "binary";
  bool json = false;
  std::vector<std::string> project;
};

TbMode tb_mode_of(const Options& o) {
  if (o.tb_mode == "binary") return TbMode::Binary;
  if (o.tb_mode == "decimal") return TbMode::Decimal;
  throw Error(ErrorCode::InvalidConfig, "--tb-mode must be binary or decimal");
}

std::vector<DitherConfig> configs_of(const Options& o) {
  std::vector<DitherConfig> cfgs;
  for (double d : o.dither) {
    DitherConfig cfg{d, o.palette_size};
    cfg.validate();
    cfgs.push_back(cfg);
  }
  if (cfgs.empty()) throw Error(ErrorCode::InvalidConfig, "at least one --dither value is required");
  return cfgs;
}

void add_common(CLI::App* cmd, Options& o, bool store, bool dither, bool backend) {
  if (store) cmd->add_option("--store", o.store, "Object store directory")->envname("GREENSTORE_STORE");
  if (dither) {
    cmd->add_option("--dither", o.dither, "Dither scale(s) in [0,1]")
        ->delimiter(',')
        ->envname("GREENSTORE_DITHER");
    cmd->add_option("--palette-size", o.palette_size, "Palette size in [2,256]")->envname("GREENSTORE_PALETTE_SIZE");
  }
  if (backend)
    cmd->add_option("--backend", o.backend, "native | external:<command>")->envname("GREENSTORE_BACKEND");
  cmd->add_flag("--json", o.json, "Emit JSON")->envname("GREENSTORE_JSON");
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      for (auto& p : list_pngs(in)) files.push_back(p);
    } else {
      files.emplace_back(in);
    }
  }
  return files;
}

int cmd_archive(const Options& o, const std::vector<std::string>& inputs) {
  if (o.dither.size() != 1) throw Error(ErrorCode::InvalidConfig, "archive takes exactly one --dither value");
  const DitherConfig cfg = configs_of(o).front();
  ObjectStore store(o.store);
  int status = kExitOk;
  auto rows = nlohmann::json::array();
  std::uint64_t original = 0, stored = 0;
  std::size_t archived = 0;
  for (const auto& file : expand_inputs(inputs)) {
    try {
      const auto row = store.archive(file, cfg);
      rows.push_back(row);
      original += row.original_bytes;
      stored += row.stored_bytes;
      ++archived;
      if (!o.json) std::cout << row.object_id << "  " << row.source_name << "  " << row.stored_bytes << " B\n";
    } catch (const Error& e) {
      std::cerr << file.string() << ": " << e.what() << '\n';
      status = std::max(status, exit_code_for(e.code()));
    }
  }
  if (o.json) {
    std::cout << rows.dump(2) << '\n';
  } else {
    std::cout << "archived " << archived << " object(s): " << format_quantity(original / 1048576.0) << " MB -> "
              << format_quantity(stored / 1048576.0) << " MB";
    if (original > 0) std::cout << " (" << format_quantity(100.0 * (1.0 - double(stored) / double(original))) << "%)";
    std::cout << '\n';
  }
  if (archived == 0 && status == kExitOk) status = kExitData;
  return status;
}

int cmd_retrieve(const Options& o, const std::string& key, const std::string& out_path) {
  const auto backend = UpscalerBackend::parse(o.backend);
  const ObjectStore store(o.store);
  const auto row = store.resolve(key);
  const auto img = store.retrieve(row.object_id, backend);
  std::ofstream out(out_path, std::ios::binary);
  const auto bytes = encode_png(img);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::StorageError, "cannot write " + out_path);
  if (o.json)
    std::cout << nlohmann::json{{"object_id", row.object_id}, {"output", out_path}, {"width", img.width()},
                                {"height", img.height()}}.dump(2)
              << '\n';
  else
    std::cout << "wrote " << out_path << " (" << img.width() << "x" << img.height() << ")\n";
  return kExitOk;
}

int cmd_evaluate(const Options& o, const std::string& dataset) {
  const auto cfgs = configs_of(o);
  const auto backend = UpscalerBackend::parse(o.backend);
  const auto rows = evaluate_dataset(dataset, cfgs, backend);
  if (o.json)
    std::cout << nlohmann::json(rows).dump(2) << '\n';
  else
    std::cout << format_quality_table(rows);
  return kExitOk;
}

int cmd_report(const Options& o, const std::string& dataset) {
  const TbMode mode = tb_mode_of(o);
  if (!(o.carbon_factor >= 0.0)) throw Error(ErrorCode::InvalidConfig, "--carbon-factor must be non-negative");
  if (dataset.empty() && o.project.empty())
    throw Error(ErrorCode::InvalidConfig, "report needs a dataset directory and/or --project");

  nlohmann::json doc = nlohmann::json::object();
  if (!dataset.empty()) {
    const auto cfgs = configs_of(o);
    const auto backend = UpscalerBackend::parse(o.backend);
    const auto rows = evaluate_dataset(dataset, cfgs, backend);
    const auto energy = energy_rows(rows, o.carbon_factor, mode);
    if (o.json) {
      doc["quality"] = rows;
      doc["energy"] = energy_rows_to_json(energy);
    } else {
      std::cout << format_quality_table(rows) << '\n'
                << "Annual storage energy (" << to_string(mode) << " TB, " << o.carbon_factor << " g CO2/kWh)\n"
                << format_energy_table(energy);
      double best = 0.0, worst = 0.0;
      for (const auto& e : energy) {
        if (e.scenario.architecture == Architecture::Distributed) best = e.report.carbon_saved_g;
        else worst = e.report.carbon_saved_g;
      }
      std::cout << "Carbon saved per year: " << format_quantity(best) << " g (distributed) to "
                << format_quantity(worst) << " g (centralized)\n";
    }
  }
  if (!o.project.empty()) {
    if (o.project.size() != 2) throw Error(ErrorCode::InvalidConfig, "--project takes <size><unit> <fraction>");
    const double tb = parse_size_tb(o.project[0], mode);
    double fraction = 0.0;
    try {
      fraction = std::stod(o.project[1]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, "bad fraction '" + o.project[1] + "'");
    }
    const Projection p = projection(tb, fraction, o.carbon_factor);
    if (o.json) {
      doc["projection"] = p;
      doc["projection"]["original_tb"] = tb;
      doc["projection"]["compression_fraction"] = fraction;
    } else {
      if (!dataset.empty()) std::cout << '\n';
      std::cout << format_projection(tb, fraction, p);
    }
  }
  if (o.json) std::cout << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_verify(const Options& o) {
  const ObjectStore store(o.store);
  const auto report = store.verify();
  if (o.json) {
    std::cout << nlohmann::json{{"checked", report.checked}, {"problems", report.problems}}.dump(2) << '\n';
  } else {
    for (const auto& p : report.problems) std::cout << "FAIL " << p << '\n';
    std::cout << "verified " << report.checked << " row(s), " << report.problems.size() << " problem(s)\n";
  }
  return report.ok() ? kExitOk : kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shrink images for archival storage and restore them on demand"};
  app.require_subcommand(1);
  Options opts;

  std::vector<std::string> inputs;
  auto* archive = app.add_subcommand("archive", "Quantize, dither, downscale and store PNG files or directories");
  add_common(archive, opts, true, true, false);
  archive->add_option("paths", inputs, "PNG files or directories")->required();

  std::string key, out_path;
  auto* retrieve = app.add_subcommand("retrieve", "Restore an archived image at its original resolution");
  add_common(retrieve, opts, true, false, true);
  retrieve->add_option("object", key, "Object id or source file name")->required();
  retrieve->add_option("output", out_path, "Output PNG path")->required();

  std::string dataset;
  auto* evaluate = app.add_subcommand("evaluate", "PSNR/SSIM/size table for a dataset directory");
  add_common(evaluate, opts, false, true, true);
  evaluate->add_option("dataset", dataset, "Directory of PNG files")->required();

  auto* report = app.add_subcommand("report", "Quality table plus annual energy and carbon figures");
  add_common(report, opts, false, true, true);
  report->add_option("dataset", dataset, "Directory of PNG files");
  report->add_option("--carbon-factor", opts.carbon_factor, "Grams CO2 per kWh")->envname("GREENSTORE_CARBON_FACTOR");
  report->add_option("--tb-mode", opts.tb_mode, "binary (2^40 B) or decimal (10^12 B)")
      ->envname("GREENSTORE_TB_MODE")
      ->check(CLI::IsMember({"binary", "decimal"}));
  report->add_option("--project", opts.project, "<size><unit> <fraction>, e.g. 10TB 0.70")->expected(2);

  auto* verify = app.add_subcommand("verify", "Check every blob against its manifest row");
  add_common(verify, opts, true, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*archive) return cmd_archive(opts, inputs);
    if (*retrieve) return cmd_retrieve(opts, key, out_path);
    if (*evaluate) return cmd_evaluate(opts, dataset);
    if (*report) return cmd_report(opts, dataset);
    if (*verify) return cmd_verify(opts);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
