// Copyright 2026 The spintomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// spintomo: spin-qudit state tomography from the command line.
//
// Subcommands
//   axes random|optimize|newton-young   produce an axis-set file
//   scales                              error-scale report for an axis set
//   simulate                            sample projective measurement counts
//   reconstruct                         estimate the state from a record
//   error                               exact expected error and its bound
//   sweep beta|theta                    axis-count / polar-angle studies
//
// File formats (UTF-8 JSON; angles in radians at full double precision)
//   axes    {"axes": [[alpha, beta], ...], "dim": d}
//   state   {"dim": d, "im": [[...]], "re": [[...]]}
//   record  {"axes": [...], "counts": [[...]], "dim": d, "shots": n}
//   reconstruction  {"dim": d, "distance": x, "mle": {...}, "raw": {...}}
// Sweeps write a CSV plus a plot-data JSON next to it.  Infinite values
// are serialized as the JSON string "inf" (JSON has no infinity literal).
// Angle flags accept radians by default and degrees with an explicit
// suffix (e.g. --theta 90deg).
//
// Every output file is accompanied by <out>.manifest.json recording the
// command, its resolved configuration, the tool version, and SHA-256
// digests of all inputs and outputs; re-running the recorded command
// reproduces the outputs byte for byte (SPINTOMO_THREADS does not affect
// results).
//
// Exit codes: 0 success, 2 usage or malformed input, 3 infeasible design,
// 4 inconsistent dimensions.

#include <openssl/evp.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spintomo.h"

namespace {

using json = nlohmann::json;

constexpr double kPi = 3.14159265358979323846;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitMismatch = 4;

struct CliError {
  int code;
  std::string message;
};

// Maps the C API's status taxonomy onto the exit-code contract.
void Check(st_status status, const std::string& context) {
  if (status == ST_OK) return;
  int code = 1;
  if (status == ST_INVALID_ARGUMENT) code = kExitUsage;
  if (status == ST_INFEASIBLE) code = kExitInfeasible;
  if (status == ST_DIMENSION_MISMATCH) code = kExitMismatch;
  throw CliError{code, context + ": " + st_last_error()};
}

template <typename T, void (*FreeFn)(T*)>
class Handle {
 public:
  Handle() = default;
  ~Handle() { FreeFn(ptr_); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& other) noexcept : ptr_(other.ptr_) { other.ptr_ = nullptr; }
  Handle& operator=(Handle&& other) noexcept {
    std::swap(ptr_, other.ptr_);
    return *this;
  }
  // For out-parameters; releases any previous value first.
  T** Receive() {
    FreeFn(ptr_);
    ptr_ = nullptr;
    return &ptr_;
  }
  T* get() const { return ptr_; }

 private:
  T* ptr_ = nullptr;
};

using AxesHandle = Handle<st_axes, st_axes_free>;
using DesignHandle = Handle<st_design, st_design_free>;
using StateHandle = Handle<st_state, st_state_free>;
using RecordHandle = Handle<st_record, st_record_free>;
using SweepHandle = Handle<st_sweep, st_sweep_free>;
using ScanHandle = Handle<st_scan, st_scan_free>;

/* ---- Small utilities --------------------------------------------------- */

std::string Sha256Hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw CliError{1, "digest computation failed"};
  }
  static const char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitUsage, "cannot open " + path};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFileBytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError{kExitUsage, "cannot write " + path};
  out << bytes;
  out.flush();
  if (!out) throw CliError{kExitUsage, "failed while writing " + path};
}

json ParseJson(const std::string& bytes, const std::string& what) {
  try {
    return json::parse(bytes);
  } catch (const std::exception& err) {
    throw CliError{kExitUsage, what + ": " + err.what()};
  }
}

// Infinity has no JSON literal; the stable convention is the string "inf".
json NumberOrInf(double value) {
  if (std::isfinite(value)) return json(value);
  return json("inf");
}

// Shortest-round-trip decimal text for stdout lines and CSV cells.
std::string NumText(double value) {
  const json j = NumberOrInf(value);
  return j.is_string() ? "inf" : j.dump();
}

// Radians by default; "deg"/"rad" suffixes are explicit.
double ParseAngleFlag(const std::string& text) {
  std::string body = text;
  double factor = 1.0;
  if (body.size() > 3 && body.substr(body.size() - 3) == "deg") {
    factor = kPi / 180.0;
    body = body.substr(0, body.size() - 3);
  } else if (body.size() > 3 && body.substr(body.size() - 3) == "rad") {
    body = body.substr(0, body.size() - 3);
  }
  try {
    std::size_t used = 0;
    const double value = std::stod(body, &used);
    if (used != body.size()) throw std::invalid_argument(text);
    return value * factor;
  } catch (const std::exception&) {
    throw CliError{kExitUsage, "cannot parse angle '" + text + "'"};
  }
}

/* ---- JSON <-> handle conversions --------------------------------------- */

json AxesToJson(const st_axes* axes) {
  json doc;
  doc["dim"] = st_axes_dim(axes);
  json list = json::array();
  const int count = st_axes_count(axes);
  for (int i = 0; i < count; ++i) {
    double alpha = 0.0;
    double beta = 0.0;
    Check(st_axes_get(axes, i, &alpha, &beta), "reading axis");
    list.push_back(json::array({alpha, beta}));
  }
  doc["axes"] = std::move(list);
  return doc;
}

AxesHandle AxesFromJson(const json& doc, const std::string& what) {
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("axes") ||
      !doc["dim"].is_number_integer() || !doc["axes"].is_array() ||
      doc["axes"].empty()) {
    throw CliError{kExitUsage, what + ": expected {\"dim\": d, \"axes\": [[alpha, beta], ...]}"};
  }
  std::vector<double> alphas;
  std::vector<double> betas;
  for (const json& pair : doc["axes"]) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number()) {
      throw CliError{kExitUsage, what + ": each axis must be [alpha, beta]"};
    }
    alphas.push_back(pair[0].get<double>());
    betas.push_back(pair[1].get<double>());
  }
  AxesHandle axes;
  Check(st_axes_create(doc["dim"].get<int>(), alphas.data(), betas.data(),
                       static_cast<int>(alphas.size()), axes.Receive()),
        what);
  return axes;
}

json MatrixToJson(const st_state* state) {
  const int dim = st_state_dim(state);
  json re = json::array();
  json im = json::array();
  for (int r = 0; r < dim; ++r) {
    json re_row = json::array();
    json im_row = json::array();
    for (int c = 0; c < dim; ++c) {
      double x = 0.0;
      double y = 0.0;
      Check(st_state_get(state, r, c, &x, &y), "reading state");
      re_row.push_back(x);
      im_row.push_back(y);
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  json doc;
  doc["dim"] = dim;
  doc["re"] = std::move(re);
  doc["im"] = std::move(im);
  return doc;
}

StateHandle MatrixFromJson(const json& doc, const std::string& what) {
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("re") ||
      !doc.contains("im") || !doc["dim"].is_number_integer()) {
    throw CliError{kExitUsage,
                   what + ": expected {\"dim\": d, \"re\": [[...]], \"im\": [[...]]}"};
  }
  const int dim = doc["dim"].get<int>();
  auto flatten = [&](const json& rows) {
    std::vector<double> flat;
    if (!rows.is_array() || static_cast<int>(rows.size()) != dim) {
      throw CliError{kExitUsage, what + ": matrix must have dim rows"};
    }
    for (const json& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != dim) {
        throw CliError{kExitUsage, what + ": matrix rows must have dim entries"};
      }
      for (const json& cell : row) {
        if (!cell.is_number()) {
          throw CliError{kExitUsage, what + ": matrix entries must be numbers"};
        }
        flat.push_back(cell.get<double>());
      }
    }
    return flat;
  };
  const std::vector<double> re = flatten(doc["re"]);
  const std::vector<double> im = flatten(doc["im"]);
  StateHandle state;
  Check(st_state_create(dim, re.data(), im.data(), state.Receive()), what);
  return state;
}

// A state argument accepts either a plain state file or a reconstruction
// document (whose "mle" member is the usable state).
StateHandle StateFromJson(const json& doc, const std::string& what) {
  if (doc.is_object() && doc.contains("mle") && !doc.contains("re")) {
    json inner = doc["mle"];
    if (inner.is_object() && !inner.contains("dim") && doc.contains("dim")) {
      inner["dim"] = doc["dim"];
    }
    return MatrixFromJson(inner, what);
  }
  return MatrixFromJson(doc, what);
}

json RecordToJson(const st_record* record) {
  AxesHandle axes;
  Check(st_record_axes(record, axes.Receive()), "reading record axes");
  json doc = AxesToJson(axes.get());
  doc["shots"] = st_record_shots(record);
  const int rows = st_record_axis_count(record);
  const int dim = st_record_dim(record);
  json counts = json::array();
  for (int v = 0; v < rows; ++v) {
    json row = json::array();
    for (int mu = 0; mu < dim; ++mu) {
      std::int64_t n = 0;
      Check(st_record_count(record, v, mu, &n), "reading counts");
      row.push_back(n);
    }
    counts.push_back(std::move(row));
  }
  doc["counts"] = std::move(counts);
  return doc;
}

RecordHandle RecordFromJson(const json& doc, const std::string& what) {
  AxesHandle axes = AxesFromJson(doc, what);
  if (!doc.contains("shots") || !doc["shots"].is_number_integer() ||
      !doc.contains("counts") || !doc["counts"].is_array()) {
    throw CliError{kExitUsage, what + ": expected \"shots\" and \"counts\""};
  }
  const int rows = st_axes_count(axes.get());
  const int dim = st_axes_dim(axes.get());
  if (static_cast<int>(doc["counts"].size()) != rows) {
    throw CliError{kExitUsage, what + ": counts must have one row per axis"};
  }
  std::vector<std::int64_t> counts;
  for (const json& row : doc["counts"]) {
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw CliError{kExitUsage, what + ": count rows must have dim entries"};
    }
    for (const json& cell : row) {
      if (!cell.is_number_integer()) {
        throw CliError{kExitUsage, what + ": counts must be integers"};
      }
      counts.push_back(cell.get<std::int64_t>());
    }
  }
  RecordHandle record;
  Check(st_record_create(axes.get(), doc["shots"].get<std::int64_t>(),
                         counts.data(), record.Receive()),
        what);
  return record;
}

/* ---- Output plumbing ---------------------------------------------------- */

std::string Dump(const json& doc) { return doc.dump(2) + "\n"; }

using NamedBytes = std::vector<std::pair<std::string, std::string>>;

// Writes outputs plus the manifest that makes the run replayable.  The
// manifest sits next to the first (primary) output.
void EmitOutputs(const std::string& command, const json& config,
                 const NamedBytes& inputs, const NamedBytes& outputs) {
  json manifest;
  manifest["command"] = command;
  manifest["config"] = config;
  manifest["tool_version"] = st_version();
  json in_digests = json::object();
  for (const auto& [path, bytes] : inputs) in_digests[path] = Sha256Hex(bytes);
  json out_digests = json::object();
  for (const auto& [path, bytes] : outputs) {
    out_digests[path] = Sha256Hex(bytes);
  }
  manifest["inputs"] = std::move(in_digests);
  manifest["outputs"] = std::move(out_digests);
  for (const auto& [path, bytes] : outputs) WriteFileBytes(path, bytes);
  WriteFileBytes(outputs.front().first + ".manifest.json", Dump(manifest));
  for (const auto& [path, bytes] : outputs) {
    std::cout << "wrote " << path << "\n";
  }
}

DesignHandle MakeDesign(const st_axes* axes) {
  DesignHandle design;
  Check(st_design_create(axes, design.Receive()), "scoring axes");
  return design;
}

void PrintDesignSummary(const st_axes* axes, bool require_feasible) {
  DesignHandle design = MakeDesign(axes);
  double total2 = 0.0;
  double eps2 = 0.0;
  Check(st_design_total_scale2(design.get(), &total2), "classical scale");
  Check(st_design_epsilon2(design.get(), &eps2), "quantum scale");
  const bool feasible = st_design_feasible(design.get()) == 1;
  std::cout << "axes: " << st_axes_count(axes) << "  dim: " << st_axes_dim(axes)
            << "\n";
  std::cout << "feasible: " << (feasible ? "yes" : "no") << "\n";
  std::cout << "S_V: " << NumText(std::sqrt(total2)) << "\n";
  std::cout << "eps_V: " << NumText(std::sqrt(eps2)) << "\n";
  if (require_feasible && !feasible) {
    throw CliError{kExitInfeasible, "axis set cannot determine every degree"};
  }
}

std::string CompanionJsonPath(const std::string& csv_path) {
  std::filesystem::path path(csv_path);
  if (path.extension() == ".csv") {
    path.replace_extension(".json");
    return path.string();
  }
  return csv_path + ".json";
}

/* ---- Commands ----------------------------------------------------------- */

struct AxesArgs {
  int dim = 0;
  int count = 0;
  std::uint64_t seed = 0;
  int iters = 0;
  std::string theta;
  std::string axes_file;
  std::string out;
  bool require_feasible = false;
};

void RunAxesRandom(const AxesArgs& args) {
  AxesHandle axes;
  Check(st_axes_random(args.dim, args.count, args.seed, axes.Receive()),
        "sampling axes");
  PrintDesignSummary(axes.get(), args.require_feasible);
  json config;
  config["count"] = args.count;
  config["dim"] = args.dim;
  config["out"] = args.out;
  config["require_feasible"] = args.require_feasible;
  config["seed"] = args.seed;
  EmitOutputs("axes random", config, {}, {{args.out, Dump(AxesToJson(axes.get()))}});
}

void RunAxesOptimize(const AxesArgs& args) {
  NamedBytes inputs;
  AxesHandle start;
  if (!args.axes_file.empty() && args.count > 0) {
    throw CliError{kExitUsage, "pass either --axes or --count, not both"};
  }
  if (!args.axes_file.empty()) {
    const std::string bytes = ReadFileBytes(args.axes_file);
    inputs.push_back({args.axes_file, bytes});
    start = AxesFromJson(ParseJson(bytes, args.axes_file), args.axes_file);
    if (args.dim != 0 && args.dim != st_axes_dim(start.get())) {
      throw CliError{kExitMismatch, "--dim disagrees with the axes file"};
    }
  } else if (args.count > 0) {
    if (args.dim < 2) throw CliError{kExitUsage, "--dim is required with --count"};
    Check(st_axes_random(args.dim, args.count, args.seed, start.Receive()),
          "sampling axes");
  } else {
    throw CliError{kExitUsage, "axes optimize needs --axes or --count"};
  }
  AxesHandle tuned;
  Check(st_axes_optimize(start.get(), args.iters, tuned.Receive()),
        "optimizing axes");
  PrintDesignSummary(tuned.get(), args.require_feasible);
  json config;
  config["axes"] = args.axes_file;
  config["count"] = args.count;
  config["dim"] = args.dim;
  config["iters"] = args.iters;
  config["out"] = args.out;
  config["require_feasible"] = args.require_feasible;
  config["seed"] = args.seed;
  EmitOutputs("axes optimize", config, inputs,
              {{args.out, Dump(AxesToJson(tuned.get()))}});
}

void RunAxesNewtonYoung(const AxesArgs& args) {
  const double theta = ParseAngleFlag(args.theta);
  AxesHandle axes;
  Check(st_axes_newton_young(args.dim, theta, axes.Receive()),
        "building the axis family");
  PrintDesignSummary(axes.get(), args.require_feasible);
  json config;
  config["dim"] = args.dim;
  config["out"] = args.out;
  config["require_feasible"] = args.require_feasible;
  config["theta"] = theta;
  EmitOutputs("axes newton-young", config, {},
              {{args.out, Dump(AxesToJson(axes.get()))}});
}

void RunScales(int dim_flag, const std::string& axes_file,
               const std::string& out) {
  const std::string bytes = ReadFileBytes(axes_file);
  AxesHandle axes = AxesFromJson(ParseJson(bytes, axes_file), axes_file);
  if (dim_flag != 0 && dim_flag != st_axes_dim(axes.get())) {
    throw CliError{kExitMismatch, "--dim disagrees with the axes file"};
  }
  DesignHandle design = MakeDesign(axes.get());
  double total2 = 0.0;
  double eps2 = 0.0;
  Check(st_design_total_scale2(design.get(), &total2), "classical scale");
  Check(st_design_epsilon2(design.get(), &eps2), "quantum scale");
  json per_ell = json::array();
  const int degrees = st_design_degree_count(design.get());
  for (int ell = 0; ell < degrees; ++ell) {
    double scale2 = 0.0;
    double gamma = 0.0;
    Check(st_design_degree_info(design.get(), ell, &scale2, &gamma),
          "degree info");
    json entry;
    entry["Gamma"] = gamma;
    entry["S"] = NumberOrInf(std::sqrt(scale2));
    entry["ell"] = ell;
    per_ell.push_back(std::move(entry));
  }
  json report;
  report["S_V"] = NumberOrInf(std::sqrt(total2));
  report["eps_V"] = NumberOrInf(std::sqrt(eps2));
  report["feasible"] = st_design_feasible(design.get()) == 1;
  report["per_ell"] = std::move(per_ell);
  if (out.empty()) {
    std::cout << Dump(report);
    return;
  }
  json config;
  config["axes"] = axes_file;
  config["dim"] = dim_flag;
  config["out"] = out;
  EmitOutputs("scales", config, {{axes_file, bytes}}, {{out, Dump(report)}});
}

void RunSimulate(const std::string& axes_file, const std::string& state_file,
                 std::int64_t shots, std::uint64_t seed,
                 const std::string& out) {
  NamedBytes inputs;
  const std::string axes_bytes = ReadFileBytes(axes_file);
  inputs.push_back({axes_file, axes_bytes});
  AxesHandle axes = AxesFromJson(ParseJson(axes_bytes, axes_file), axes_file);
  StateHandle state;
  if (state_file.empty()) {
    Check(st_state_mixed(st_axes_dim(axes.get()), state.Receive()),
          "building the maximally mixed state");
  } else {
    const std::string state_bytes = ReadFileBytes(state_file);
    inputs.push_back({state_file, state_bytes});
    state = StateFromJson(ParseJson(state_bytes, state_file), state_file);
  }
  RecordHandle record;
  Check(st_simulate(state.get(), axes.get(), shots, seed, record.Receive()),
        "simulating measurements");
  json config;
  config["axes"] = axes_file;
  config["out"] = out;
  config["seed"] = seed;
  config["shots"] = shots;
  config["state"] = state_file;
  EmitOutputs("simulate", config, inputs,
              {{out, Dump(RecordToJson(record.get()))}});
}

void RunReconstruct(const std::string& record_file, const std::string& out) {
  const std::string bytes = ReadFileBytes(record_file);
  RecordHandle record =
      RecordFromJson(ParseJson(bytes, record_file), record_file);
  StateHandle raw;
  Check(st_reconstruct(record.get(), raw.Receive()), "reconstructing");
  StateHandle mle;
  Check(st_state_project(raw.get(), mle.Receive()), "projecting");
  double distance = 0.0;
  Check(st_state_distance(raw.get(), mle.get(), &distance), "distance");
  json raw_doc = MatrixToJson(raw.get());
  json mle_doc = MatrixToJson(mle.get());
  raw_doc.erase("dim");
  mle_doc.erase("dim");
  json doc;
  doc["dim"] = st_record_dim(record.get());
  doc["distance"] = distance;
  doc["mle"] = std::move(mle_doc);
  doc["raw"] = std::move(raw_doc);
  std::cout << "distance: " << NumText(distance) << "\n";
  json config;
  config["out"] = out;
  config["record"] = record_file;
  EmitOutputs("reconstruct", config, {{record_file, bytes}}, {{out, Dump(doc)}});
}

void RunError(const std::string& axes_file, const std::string& state_file,
              std::int64_t shots, const std::string& out) {
  const std::string axes_bytes = ReadFileBytes(axes_file);
  AxesHandle axes = AxesFromJson(ParseJson(axes_bytes, axes_file), axes_file);
  const std::string state_bytes = ReadFileBytes(state_file);
  const json state_doc = ParseJson(state_bytes, state_file);

  DesignHandle design = MakeDesign(axes.get());
  double eps2 = 0.0;
  Check(st_design_epsilon2(design.get(), &eps2), "quantum scale");
  const double bound = std::sqrt(eps2 / static_cast<double>(shots));

  json report;
  report["bound"] = NumberOrInf(bound);
  const bool combined = state_doc.is_object() && state_doc.contains("mle") &&
                        state_doc.contains("raw");
  if (combined) {
    json raw_inner = state_doc["raw"];
    json mle_inner = state_doc["mle"];
    if (state_doc.contains("dim")) {
      if (!raw_inner.contains("dim")) raw_inner["dim"] = state_doc["dim"];
      if (!mle_inner.contains("dim")) mle_inner["dim"] = state_doc["dim"];
    }
    StateHandle raw = MatrixFromJson(raw_inner, state_file);
    StateHandle mle = MatrixFromJson(mle_inner, state_file);
    double raw_error = 0.0;
    double mle_error = 0.0;
    Check(st_exact_error(axes.get(), raw.get(), shots, &raw_error),
          "error estimate");
    Check(st_exact_error(axes.get(), mle.get(), shots, &mle_error),
          "error estimate");
    report["error_mle"] = mle_error;
    report["error_raw"] = raw_error;
    std::cout << "error(raw): " << NumText(raw_error) << "\n";
    std::cout << "error(mle): " << NumText(mle_error) << "\n";
  } else {
    StateHandle state = StateFromJson(state_doc, state_file);
    double value = 0.0;
    Check(st_exact_error(axes.get(), state.get(), shots, &value),
          "error estimate");
    report["error"] = value;
    std::cout << "error: " << NumText(value) << "\n";
  }
  std::cout << "bound: " << NumText(bound) << "\n";
  if (out.empty()) return;
  json config;
  config["axes"] = axes_file;
  config["out"] = out;
  config["shots"] = shots;
  config["state"] = state_file;
  EmitOutputs("error", config,
              {{axes_file, axes_bytes}, {state_file, state_bytes}},
              {{out, Dump(report)}});
}

void RunSweepBeta(int dim, int p_max, int candidates, int iters,
                  std::uint64_t seed, double time_budget,
                  const std::string& out) {
  SweepHandle sweep;
  Check(st_sweep_beta(dim, p_max, candidates, iters, seed, time_budget,
                      sweep.Receive()),
        "axis-count sweep");
  const int size = st_sweep_size(sweep.get());
  std::string csv = "p,beta_tilde\n";
  json p_list = json::array();
  json beta_list = json::array();
  json best_list = json::array();
  for (int k = 0; k < size; ++k) {
    int p = 0;
    double beta = 0.0;
    Check(st_sweep_entry(sweep.get(), k, &p, &beta), "sweep entry");
    csv += std::to_string(p) + "," + NumText(beta) + "\n";
    p_list.push_back(p);
    beta_list.push_back(NumberOrInf(beta));
    AxesHandle best;
    Check(st_sweep_axes(sweep.get(), k, best.Receive()), "sweep axes");
    json entry = AxesToJson(best.get());
    entry["p"] = p;
    best_list.push_back(std::move(entry));
  }
  json plot;
  plot["best_axes"] = std::move(best_list);
  plot["beta_tilde"] = std::move(beta_list);
  plot["dim"] = dim;
  plot["p"] = std::move(p_list);
  json config;
  config["candidates"] = candidates;
  config["dim"] = dim;
  config["iters"] = iters;
  config["out"] = out;
  config["pmax"] = p_max;
  config["seed"] = seed;
  config["time_budget"] = time_budget;
  EmitOutputs("sweep beta", config, {},
              {{out, csv}, {CompanionJsonPath(out), Dump(plot)}});
}

std::vector<double> DefaultThetaGrid() {
  const int points = 120;
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k) {
    grid[k] = 0.03 + (kPi / 2 - 0.03) * k / (points - 1);
  }
  return grid;
}

// --dim accepts "4" or an inclusive range "3..10".
std::pair<int, int> ParseDimRange(const std::string& text) {
  try {
    const std::size_t split = text.find("..");
    if (split == std::string::npos) {
      std::size_t used = 0;
      const int dim = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {dim, dim};
    }
    std::size_t used = 0;
    const int lo = std::stoi(text.substr(0, split), &used);
    if (used != split) throw std::invalid_argument(text);
    const std::string rest = text.substr(split + 2);
    const int hi = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const CliError&) {
    throw;
  } catch (const std::exception&) {
    throw CliError{kExitUsage, "cannot parse --dim '" + text + "'"};
  }
}

void RunSweepTheta(const std::string& dim_text, bool fit,
                   const std::string& out) {
  const auto [lo, hi] = ParseDimRange(dim_text);
  if (lo < 2 || hi < lo) {
    throw CliError{kExitUsage, "--dim range must be ascending with dim >= 2"};
  }
  const std::vector<double> grid = DefaultThetaGrid();

  if (lo == hi && !fit) {
    ScanHandle scan;
    Check(st_scan_theta(lo, grid.data(), static_cast<int>(grid.size()),
                        scan.Receive()),
          "polar-angle scan");
    std::string csv = "theta,eps_theta\n";
    json theta_list = json::array();
    json eps_list = json::array();
    for (int k = 0; k < st_scan_size(scan.get()); ++k) {
      double theta = 0.0;
      double eps = 0.0;
      Check(st_scan_entry(scan.get(), k, &theta, &eps), "scan entry");
      csv += NumText(theta) + "," + NumText(eps) + "\n";
      theta_list.push_back(theta);
      eps_list.push_back(NumberOrInf(eps));
    }
    double theta_opt = 0.0;
    Check(st_scan_optimum(scan.get(), &theta_opt), "scan optimum");
    json plot;
    plot["dim"] = lo;
    plot["eps_theta"] = std::move(eps_list);
    plot["theta"] = std::move(theta_list);
    plot["theta_opt"] = theta_opt;
    std::cout << "theta_opt: " << NumText(theta_opt) << "\n";
    json config;
    config["dim"] = dim_text;
    config["fit"] = false;
    config["out"] = out;
    EmitOutputs("sweep theta", config, {},
                {{out, csv}, {CompanionJsonPath(out), Dump(plot)}});
    return;
  }

  if (lo == hi) {
    throw CliError{kExitUsage, "--fit needs a dimension range like --dim 3..10"};
  }
  std::string csv = "dim,theta_opt\n";
  json dims = json::array();
  json opts = json::array();
  double sum_xy = 0.0;
  double sum_xx = 0.0;
  for (int dim = lo; dim <= hi; ++dim) {
    ScanHandle scan;
    Check(st_scan_theta(dim, grid.data(), static_cast<int>(grid.size()),
                        scan.Receive()),
          "polar-angle scan");
    double theta_opt = 0.0;
    Check(st_scan_optimum(scan.get(), &theta_opt), "scan optimum");
    csv += std::to_string(dim) + "," + NumText(theta_opt) + "\n";
    dims.push_back(dim);
    opts.push_back(theta_opt);
    sum_xy += (1.0 / dim) * (kPi / 2 - theta_opt);
    sum_xx += (1.0 / dim) * (1.0 / dim);
  }
  json plot;
  plot["dims"] = std::move(dims);
  plot["theta_opt"] = std::move(opts);
  if (fit) {
    // theta_opt(d) = (pi/2)(1 - 1/(x d)): a through-origin fit of
    // pi/2 - theta_opt against 1/d determines x.
    const double slope = sum_xy / sum_xx;
    const double scale = kPi / (2.0 * slope);
    plot["x"] = scale;
    std::cout << "x: " << NumText(scale) << "\n";
  }
  json config;
  config["dim"] = dim_text;
  config["fit"] = fit;
  config["out"] = out;
  EmitOutputs("sweep theta", config, {},
              {{out, csv}, {CompanionJsonPath(out), Dump(plot)}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-qudit state tomography toolkit"};
  app.require_subcommand(1);

  AxesArgs axes_args;
  CLI::App* axes = app.add_subcommand("axes", "produce axis-set files");
  axes->require_subcommand(1);
  CLI::App* axes_random =
      axes->add_subcommand("random", "axes drawn uniformly from the sphere");
  axes_random->add_option("--dim", axes_args.dim, "qudit dimension")->required();
  axes_random->add_option("--count", axes_args.count, "number of axes")
      ->required();
  axes_random->add_option("--seed", axes_args.seed, "random seed");
  axes_random->add_option("--out", axes_args.out, "output axes file")
      ->required();
  axes_random->add_flag("--require-feasible", axes_args.require_feasible,
                        "fail (exit 3) unless the set determines every degree");
  axes_random->callback([&] { RunAxesRandom(axes_args); });

  CLI::App* axes_opt = axes->add_subcommand(
      "optimize", "locally minimize the quantum error scale");
  axes_opt->add_option("--dim", axes_args.dim, "qudit dimension");
  axes_opt->add_option("--count", axes_args.count,
                       "number of axes for a random start");
  axes_opt->add_option("--seed", axes_args.seed, "random seed");
  axes_opt->add_option("--iters", axes_args.iters,
                       "simplex iterations (0 = default)");
  axes_opt->add_option("--axes", axes_args.axes_file,
                       "axes file to start from (instead of --count)");
  axes_opt->add_option("--out", axes_args.out, "output axes file")->required();
  axes_opt->add_flag("--require-feasible", axes_args.require_feasible,
                     "fail (exit 3) unless the set determines every degree");
  axes_opt->callback([&] { RunAxesOptimize(axes_args); });

  CLI::App* axes_ny = axes->add_subcommand(
      "newton-young", "equal-azimuth axes on a common polar cone");
  axes_ny->add_option("--dim", axes_args.dim, "qudit dimension")->required();
  axes_ny->add_option("--theta", axes_args.theta,
                      "polar angle (radians, or e.g. 85deg)")
      ->required();
  axes_ny->add_option("--out", axes_args.out, "output axes file")->required();
  axes_ny->add_flag("--require-feasible", axes_args.require_feasible,
                    "fail (exit 3) unless the set determines every degree");
  axes_ny->callback([&] { RunAxesNewtonYoung(axes_args); });

  int scales_dim = 0;
  std::string scales_axes;
  std::string scales_out;
  CLI::App* scales =
      app.add_subcommand("scales", "error-scale report for an axis set");
  scales->add_option("--dim", scales_dim, "expected qudit dimension");
  scales->add_option("--axes", scales_axes, "axes file")->required();
  scales->add_option("--out", scales_out, "report file (default: stdout)");
  scales->callback([&] { RunScales(scales_dim, scales_axes, scales_out); });

  std::string sim_axes;
  std::string sim_state;
  std::int64_t sim_shots = 0;
  std::uint64_t sim_seed = 0;
  std::string sim_out;
  CLI::App* simulate =
      app.add_subcommand("simulate", "sample projective measurement counts");
  simulate->add_option("--axes", sim_axes, "axes file")->required();
  simulate->add_option("--state", sim_state,
                       "state file (default: maximally mixed)");
  simulate->add_option("--shots", sim_shots, "measurements per axis")
      ->required();
  simulate->add_option("--seed", sim_seed, "random seed");
  simulate->add_option("--out", sim_out, "output record file")->required();
  simulate->callback(
      [&] { RunSimulate(sim_axes, sim_state, sim_shots, sim_seed, sim_out); });

  std::string rec_record;
  std::string rec_out;
  CLI::App* reconstruct =
      app.add_subcommand("reconstruct", "estimate the state from a record");
  reconstruct->add_option("--record", rec_record, "record file")->required();
  reconstruct->add_option("--out", rec_out, "output state file")->required();
  reconstruct->callback([&] { RunReconstruct(rec_record, rec_out); });

  std::string err_axes;
  std::string err_state;
  std::int64_t err_shots = 0;
  std::string err_out;
  CLI::App* error_cmd = app.add_subcommand(
      "error", "exact expected reconstruction error and its bound");
  error_cmd->add_option("--axes", err_axes, "axes file")->required();
  error_cmd->add_option("--state", err_state, "state or reconstruction file")
      ->required();
  error_cmd->add_option("--shots", err_shots, "measurements per axis")
      ->required();
  error_cmd->add_option("--out", err_out, "report file (optional)");
  error_cmd->callback(
      [&] { RunError(err_axes, err_state, err_shots, err_out); });

  CLI::App* sweep = app.add_subcommand("sweep", "axis-count and angle studies");
  sweep->require_subcommand(1);
  int sb_dim = 0;
  int sb_pmax = 0;
  int sb_candidates = 1000;
  int sb_iters = 0;
  std::uint64_t sb_seed = 0;
  double sb_budget = 0.0;
  std::string sb_out;
  CLI::App* sweep_beta = sweep->add_subcommand(
      "beta", "best eps^2 |V| as extra axes are allowed");
  sweep_beta->add_option("--dim", sb_dim, "qudit dimension")->required();
  sweep_beta->add_option("--pmax", sb_pmax, "largest number of extra axes")
      ->required();
  sweep_beta->add_option("--candidates", sb_candidates,
                         "random candidates per step");
  sweep_beta->add_option("--iters", sb_iters,
                         "simplex polish iterations per candidate");
  sweep_beta->add_option("--seed", sb_seed, "random seed");
  sweep_beta->add_option("--time-budget", sb_budget,
                         "wall-clock budget in seconds (0 = none)");
  sweep_beta->add_option("--out", sb_out, "output CSV file")->required();
  sweep_beta->callback([&] {
    RunSweepBeta(sb_dim, sb_pmax, sb_candidates, sb_iters, sb_seed, sb_budget,
                 sb_out);
  });

  std::string st_dim;
  bool st_fit = false;
  std::string st_out;
  CLI::App* sweep_theta = sweep->add_subcommand(
      "theta", "equal-azimuth family error versus polar angle");
  sweep_theta->add_option("--dim", st_dim, "dimension, or a range like 3..10")
      ->required();
  sweep_theta->add_flag("--fit", st_fit,
                        "fit theta_opt = (pi/2)(1 - 1/(x d)) over the range");
  sweep_theta->add_option("--out", st_out, "output CSV file")->required();
  sweep_theta->callback([&] { RunSweepTheta(st_dim, st_fit, st_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForAllHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  } catch (const CliError& err) {
    std::cerr << "error: " << err.message << "\n";
    return err.code;
  }
  return 0;
}
