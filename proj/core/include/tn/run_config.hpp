#pragma once

#include "tn/dmrg.hpp"

#include <cstdint>
#include <string>
#include <vector>

// Batch-run configuration: flat `key = value` lines, `#` comments, dotted
// section keys (dmrg.sweeps = 20). Unknown keys, type errors, and missing
// required fields are reported with their line number.

namespace tn {

enum class ModelKind { Heisenberg, Xxz, Hubbard, TJ };

struct Measurement {
  enum class Kind { Energy, SzProfile, Correlation } kind;
  std::string op_a; // correlation operands
  std::string op_b;
};

struct RunConfig {
  ModelKind model = ModelKind::Heisenberg;
  std::size_t sites = 0;
  double spin = 0.5;      // spin models
  double coupling_j = 1.0; // J (xy part for xxz)
  double coupling_jz = 1.0;
  double hopping_t = 1.0; // fermion models
  double hubbard_u = 0.0;
  double mu = 0.0;
  DmrgOptions dmrg;
  std::vector<Measurement> measurements;
  bool disk_storage = false;
  std::string storage_dir = "storage";
  std::uint64_t seed = 0;
  std::string output_dir = ".";
};

struct ConfigError : std::runtime_error {
  ConfigError(std::size_t line, const std::string &msg)
      : std::runtime_error("config line " + std::to_string(line) + ": " + msg),
        line_number(line) {}
  std::size_t line_number;
};

RunConfig parse_config(const std::string &text);
RunConfig parse_config_file(const std::string &path);

} // namespace tn
