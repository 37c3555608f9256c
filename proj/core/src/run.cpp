#include "tn/run.hpp"

#include "tn/contract.hpp"
#include "tn/mp_measure.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tn {

namespace {

Tensor matmul(const Tensor &a, const Tensor &b) {
  return contract(a, {2}, b, {1});
}

Tensor adjoint(const Tensor &m) { return permute(conjugate(m), {2, 1}); }

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::size_t model_phys_dim(const RunConfig &config) {
  switch (config.model) {
  case ModelKind::Heisenberg:
  case ModelKind::Xxz:
    return static_cast<std::size_t>(std::lround(2.0 * config.spin)) + 1;
  case ModelKind::Hubbard:
    return 4;
  case ModelKind::TJ:
    return 3;
  }
  return 0;
}

MpoBlockMatrix spin_bulk(const RunConfig &config) {
  const SiteOperatorSet ops = spin_ops(config.spin);
  const std::size_t d = ops.dim();
  const double j = config.coupling_j;
  const double jz =
      config.model == ModelKind::Heisenberg ? config.coupling_j
                                            : config.coupling_jz;
  MpoBlockMatrix w(5, d);
  w.set(1, 1, ops.at("Id"));
  w.set(2, 1, ops.at("Sm"));
  w.set(3, 1, ops.at("Sp"));
  w.set(4, 1, ops.at("Sz"));
  w.set(5, 2, ops.at("Sp") * (0.5 * j));
  w.set(5, 3, ops.at("Sm") * (0.5 * j));
  w.set(5, 4, ops.at("Sz") * jz);
  w.set(5, 5, ops.at("Id"));
  return w;
}

MpoBlockMatrix hubbard_bulk(const RunConfig &config) {
  const SiteOperatorSet ops = fermion_ops();
  const Tensor &f = ops.at("F");
  const Tensor cdag_up = adjoint(ops.at("Cup"));
  const Tensor cdag_dn = adjoint(ops.at("Cdn"));
  const double t = config.hopping_t;
  MpoBlockMatrix w(6, 4);
  w.set(1, 1, ops.at("Id"));
  w.set(2, 1, ops.at("Cup"));
  w.set(3, 1, cdag_up);
  w.set(4, 1, ops.at("Cdn"));
  w.set(5, 1, cdag_dn);
  w.set(6, 1, matmul(ops.at("Nup"), ops.at("Ndn")) * config.hubbard_u -
                  ops.at("Ndens") * config.mu);
  w.set(6, 2, matmul(cdag_up, f) * (-t));
  w.set(6, 3, matmul(f, ops.at("Cup")) * (-t));
  w.set(6, 4, matmul(cdag_dn, f) * (-t));
  w.set(6, 5, matmul(f, ops.at("Cdn")) * (-t));
  w.set(6, 6, ops.at("Id"));
  return w;
}

MpoBlockMatrix tj_bulk(const RunConfig &config) {
  const SiteOperatorSet ops = tj_ops();
  const Tensor &f = ops.at("F");
  const Tensor cdag_up = adjoint(ops.at("Cup"));
  const Tensor cdag_dn = adjoint(ops.at("Cdn"));
  const double t = config.hopping_t;
  const double j = config.coupling_j;
  MpoBlockMatrix w(10, 3);
  w.set(1, 1, ops.at("Id"));
  w.set(2, 1, ops.at("Cup"));
  w.set(3, 1, cdag_up);
  w.set(4, 1, ops.at("Cdn"));
  w.set(5, 1, cdag_dn);
  w.set(6, 1, ops.at("Sm"));
  w.set(7, 1, ops.at("Sp"));
  w.set(8, 1, ops.at("Sz"));
  w.set(9, 1, ops.at("Ndens"));
  w.set(10, 1, ops.at("Ndens") * (-config.mu));
  w.set(10, 2, matmul(cdag_up, f) * (-t));
  w.set(10, 3, matmul(f, ops.at("Cup")) * (-t));
  w.set(10, 4, matmul(cdag_dn, f) * (-t));
  w.set(10, 5, matmul(f, ops.at("Cdn")) * (-t));
  w.set(10, 6, ops.at("Sp") * (0.5 * j));
  w.set(10, 7, ops.at("Sm") * (0.5 * j));
  w.set(10, 8, ops.at("Sz") * j);
  w.set(10, 9, ops.at("Ndens") * (-0.25 * j));
  w.set(10, 10, ops.at("Id"));
  return w;
}

const char *model_name(ModelKind m) {
  switch (m) {
  case ModelKind::Heisenberg:
    return "heisenberg";
  case ModelKind::Xxz:
    return "xxz";
  case ModelKind::Hubbard:
    return "hubbard";
  case ModelKind::TJ:
    return "tj";
  }
  return "?";
}

bool is_fermionic_name(const std::string &name) {
  return name == "Cup" || name == "Cdn" || name == "Cdagup" ||
         name == "Cdagdn";
}

Tensor resolve_operator(const SiteOperatorSet &ops, const std::string &name) {
  if (ops.contains(name))
    return ops.at(name);
  if (name.rfind("Cdag", 0) == 0) {
    const std::string base = "C" + name.substr(4);
    if (ops.contains(base))
      return adjoint(ops.at(base));
  }
  throw std::invalid_argument("tn: unknown operator '" + name +
                              "' for this model");
}

Tensor sz_like_operator(const RunConfig &config, const SiteOperatorSet &ops) {
  if (ops.contains("Sz"))
    return ops.at("Sz");
  (void)config; // hubbard: (Nup - Ndn) / 2
  return (ops.at("Nup") - ops.at("Ndn")) * 0.5;
}

[[noreturn]] void rethrow_with_stage(const char *stage) {
  try {
    throw;
  } catch (const std::exception &e) {
    throw std::runtime_error(std::string("[") + stage + "] " + e.what());
  }
}

} // namespace

SiteOperatorSet model_operators(const RunConfig &config) {
  switch (config.model) {
  case ModelKind::Heisenberg:
  case ModelKind::Xxz:
    return spin_ops(config.spin);
  case ModelKind::Hubbard:
    return fermion_ops();
  case ModelKind::TJ:
    return tj_ops();
  }
  throw std::invalid_argument("tn: unknown model");
}

MPO model_mpo(const RunConfig &config) {
  switch (config.model) {
  case ModelKind::Heisenberg:
  case ModelKind::Xxz:
    return make_mpo(spin_bulk(config), config.sites);
  case ModelKind::Hubbard:
    return make_mpo(hubbard_bulk(config), config.sites);
  case ModelKind::TJ:
    return make_mpo(tj_bulk(config), config.sites);
  }
  throw std::invalid_argument("tn: unknown model");
}

RunArtifacts run(const RunConfig &config, std::ostream *log) {
  namespace fs = std::filesystem;
  RunArtifacts out;

  SiteOperatorSet ops;
  MPO h;
  MPS psi;
  try {
    ops = model_operators(config);
    h = model_mpo(config);
    psi = product_mps(model_phys_dim(config), config.sites,
                      ProductState::RandomBasis, config.seed);
  } catch (...) {
    rethrow_with_stage("setup");
  }

  if (log)
    *log << "model " << model_name(config.model) << ", " << config.sites
         << " sites, seed " << config.seed << "\n";

  DmrgResult result;
  try {
    if (config.disk_storage) {
      const fs::path dir = config.storage_dir;
      LargeMPS lpsi = large_mps(psi, dir);
      LargeMPO lh = large_mpo(h, dir);
      result = dmrg(lpsi, lh, config.dmrg);
      psi = to_memory(lpsi);
    } else {
      result = dmrg(psi, h, config.dmrg);
    }
  } catch (...) {
    rethrow_with_stage("dmrg");
  }

  if (log) {
    for (std::size_t s = 0; s < result.sweeps.size(); ++s)
      *log << "sweep " << s + 1 << ": energy " << fmt_num(result.sweeps[s].energy)
           << ", bond " << result.sweeps[s].max_bond << "\n";
    *log << "final energy " << fmt_num(result.energy) << "\n";
  }

  try {
    fs::create_directories(config.output_dir);
    const fs::path summary_path = fs::path(config.output_dir) / "summary.txt";
    const fs::path csv_path = fs::path(config.output_dir) / "results.csv";

    std::ostringstream csv;
    csv << "# schema=1\n";
    csv << "# block=sweeps\n";
    csv << "sweep,energy,max_bond,max_trunc_err\n";
    for (std::size_t s = 0; s < result.sweeps.size(); ++s) {
      const SweepReport &r = result.sweeps[s];
      csv << s + 1 << "," << fmt_num(r.energy) << "," << r.max_bond << ","
          << fmt_num(r.max_trunc_err) << "\n";
    }

    double energy_measured = result.energy;
    for (const Measurement &m : config.measurements) {
      switch (m.kind) {
      case Measurement::Kind::Energy: {
        energy_measured = expect(psi, h).real();
        csv << "# block=energy\n";
        csv << "energy\n" << fmt_num(energy_measured) << "\n";
        break;
      }
      case Measurement::Kind::SzProfile: {
        const Tensor op = sz_like_operator(config, ops);
        const Tensor *op_list[] = {&op};
        const Tensor profile = correlation(psi, op_list);
        csv << "# block=sz_profile\n";
        csv << "site,value\n";
        for (std::size_t i = 1; i <= config.sites; ++i)
          csv << i << "," << fmt_num(profile.element({i}).real()) << "\n";
        break;
      }
      case Measurement::Kind::Correlation: {
        const Tensor op_a = resolve_operator(ops, m.op_a);
        const Tensor op_b = resolve_operator(ops, m.op_b);
        const bool fermionic = (config.model == ModelKind::Hubbard ||
                                config.model == ModelKind::TJ) &&
                               is_fermionic_name(m.op_a) &&
                               is_fermionic_name(m.op_b);
        const Tensor parity = fermionic ? ops.at("F") : Tensor();
        const Tensor corr = correlation_matrix(
            psi, op_a, op_b, fermionic ? &parity : nullptr);
        csv << "# block=correlation:" << m.op_a << ":" << m.op_b << "\n";
        csv << "i,j,re,im\n";
        for (std::size_t i = 1; i <= config.sites; ++i)
          for (std::size_t j = 1; j <= config.sites; ++j) {
            const cplx v = corr.element({i, j});
            csv << i << "," << j << "," << fmt_num(v.real()) << ","
                << fmt_num(v.imag()) << "\n";
          }
        break;
      }
      }
    }

    std::ofstream csv_file(csv_path);
    csv_file << csv.str();
    if (!csv_file)
      throw std::runtime_error("cannot write " + csv_path.string());

    double wall = 0.0;
    std::size_t max_bond = 0;
    for (const SweepReport &r : result.sweeps) {
      wall += r.seconds;
      max_bond = std::max(max_bond, r.max_bond);
    }
    char energy_buf[40];
    std::snprintf(energy_buf, sizeof(energy_buf), "%.9f", result.energy);

    std::ofstream summary(summary_path);
    summary << "tndmrg summary\n";
    summary << "model = " << model_name(config.model) << "\n";
    summary << "sites = " << config.sites << "\n";
    summary << "seed = " << config.seed << "\n";
    summary << "storage = " << (config.disk_storage ? "disk" : "memory")
            << "\n";
    summary << "sweeps_run = " << result.sweeps.size() << "\n";
    summary << "energy = " << energy_buf << "\n";
    summary << "max_bond = " << max_bond << "\n";
    summary << "wall_seconds = " << fmt_num(wall) << "\n";
    if (!summary)
      throw std::runtime_error("cannot write " + summary_path.string());

    out.dmrg = std::move(result);
    out.summary_path = summary_path.string();
    out.csv_path = csv_path.string();
  } catch (...) {
    rethrow_with_stage("report");
  }
  return out;
}

int run_main(const RunConfig &config, std::ostream &err, bool verbose) {
  try {
    run(config, verbose ? &err : nullptr);
    return kExitOk;
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

} // namespace tn
