#pragma once

#include "tn/mp.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

// Disk-resident MPS/MPO/Environment chains with transparent per-site
// fetch/store and a fixed, versioned binary tensor format:
//
//   magic "DMRJ" | u32 version | u8 scalar kind (0 real, 1 complex)
//   u64 rank | u64 shape[rank] | elements, little-endian column-major
//   (complex elements as re,im pairs)
//
// Writes go to a temporary file followed by an atomic rename, so a crash
// never leaves a readable-but-corrupt file. One writer per file; concurrent
// readers are fine. No cross-process locking is provided.

namespace tn {

inline constexpr const char *kTensorFileExtension = ".dmrjulia";
inline constexpr std::uint32_t kTensorFileVersion = 1;

struct IoStats {
  std::uint64_t payload_reads = 0;
  std::uint64_t payload_writes = 0;
  std::uint64_t header_reads = 0;
};
IoStats io_stats();
void reset_io_stats();

void tensor_to_disk(const Tensor &t, const std::filesystem::path &path);
Tensor tensor_from_disk(const std::filesystem::path &path);
/// Reads only the header.
ScalarKind tensor_kind_from_disk(const std::filesystem::path &path);

/// Site filename scheme shared by every chain: <label><4-digit index><ext>.
std::filesystem::path site_file_name(const std::filesystem::path &dir,
                                     const std::string &label,
                                     std::size_t site,
                                     const std::string &ext = kTensorFileExtension);

namespace detail {

/// File-backed tensor list: the scalar kind is kept in memory so type
/// queries never touch the disk; link consistency is checked lazily on
/// fetch by the algorithms themselves.
class LargeChain {
public:
  LargeChain() = default;
  LargeChain(std::vector<std::filesystem::path> names, ScalarKind kind);

  std::size_t length() const noexcept { return names_.size(); }
  ScalarKind kind() const noexcept { return kind_; }
  Tensor site(std::size_t i) const;
  void set_site(std::size_t i, Tensor t);
  const std::filesystem::path &file(std::size_t i) const;

private:
  std::vector<std::filesystem::path> names_;
  ScalarKind kind_ = ScalarKind::RealF64;
};

} // namespace detail

class LargeMPS : public detail::LargeChain {
public:
  LargeMPS() = default;
  LargeMPS(std::vector<std::filesystem::path> names, ScalarKind kind,
           std::size_t oc = 1)
      : LargeChain(std::move(names), kind), oc_(oc) {}

  std::size_t center() const noexcept { return oc_; }
  void set_center(std::size_t oc) { oc_ = oc; }

private:
  std::size_t oc_ = 1;
};

class LargeMPO : public detail::LargeChain {
public:
  using LargeChain::LargeChain;
  LargeMPO() = default;
};

class LargeEnv : public detail::LargeChain {
public:
  using LargeChain::LargeChain;
  LargeEnv() = default;
};

// -- constructors from in-memory chains ---------------------------------------

LargeMPS large_mps(const MPS &psi, const std::filesystem::path &dir,
                   const std::string &label = "psi_");
LargeMPO large_mpo(const MPO &h, const std::filesystem::path &dir,
                   const std::string &label = "mpo_");
/// Writes both the left and the right environment sets.
std::pair<LargeEnv, LargeEnv> large_env(const Environment &lenv,
                                        const Environment &renv,
                                        const std::filesystem::path &dir,
                                        const std::string &label = "env_");
/// Unwritten chain of empty slots backed by the naming scheme.
LargeEnv large_env_slots(std::size_t ns, ScalarKind kind,
                         const std::filesystem::path &dir,
                         const std::string &label);

MPS to_memory(const LargeMPS &psi);
MPO to_memory(const LargeMPO &h);

// -- loading -------------------------------------------------------------------

/// Rebuild a handle from files on disk. Only headers are read, one per file,
/// to verify that every site shares one scalar kind.
LargeMPS load_mps(std::size_t ns, const std::filesystem::path &dir,
                  const std::string &label = "psi_",
                  const std::string &ext = kTensorFileExtension,
                  std::size_t oc = 1);
LargeMPO load_mpo(std::size_t ns, const std::filesystem::path &dir,
                  const std::string &label = "mpo_",
                  const std::string &ext = kTensorFileExtension);
LargeEnv load_lenv(std::size_t ns, const std::filesystem::path &dir,
                   const std::string &label = "env_L_",
                   const std::string &ext = kTensorFileExtension);
LargeEnv load_renv(std::size_t ns, const std::filesystem::path &dir,
                   const std::string &label = "env_R_",
                   const std::string &ext = kTensorFileExtension);

// -- copying -------------------------------------------------------------------

/// File-level copies under new names; exactly one read and one write per
/// site. The source is untouched and stays independent of the copy.
LargeMPS copy_large(const LargeMPS &src, const std::filesystem::path &dir,
                    const std::string &label);
LargeMPO copy_large(const LargeMPO &src, const std::filesystem::path &dir,
                    const std::string &label);
LargeEnv copy_large(const LargeEnv &src, const std::filesystem::path &dir,
                    const std::string &label);

// -- gauge management on disk chains -------------------------------------------

GaugeReport gauge_move(LargeMPS &psi, Direction dir,
                       const TruncationSpec &trunc = {});
void move_center(LargeMPS &psi, std::size_t target,
                 const TruncationSpec &trunc = {});

} // namespace tn
