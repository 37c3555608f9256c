#include "tn/storage.hpp"

#include "chain_ops.hpp"

#include <atomic>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace tn {

namespace {

std::atomic<std::uint64_t> g_payload_reads{0};
std::atomic<std::uint64_t> g_payload_writes{0};
std::atomic<std::uint64_t> g_header_reads{0};

[[noreturn]] void io_fail(const std::string &msg) {
  throw std::runtime_error("tn: " + msg);
}

void put_u32(std::string &buf, std::uint32_t v) {
  for (int k = 0; k < 4; ++k)
    buf.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

void put_u64(std::string &buf, std::uint64_t v) {
  for (int k = 0; k < 8; ++k)
    buf.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

void put_f64(std::string &buf, double v) {
  put_u64(buf, std::bit_cast<std::uint64_t>(v));
}

struct Reader {
  const std::string &buf;
  std::size_t pos = 0;
  const std::filesystem::path &path;

  void need(std::size_t n) const {
    if (pos + n > buf.size())
      io_fail("truncated tensor file: " + path.string());
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + k]))
           << (8 * k);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos + k]))
           << (8 * k);
    pos += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(buf[pos++]);
  }
};

struct Header {
  ScalarKind kind;
  Shape shape;
};

Header parse_header(Reader &r) {
  r.need(4);
  if (std::memcmp(r.buf.data() + r.pos, "DMRJ", 4) != 0)
    io_fail("bad magic in tensor file: " + r.path.string());
  r.pos += 4;
  const std::uint32_t version = r.u32();
  if (version != kTensorFileVersion)
    io_fail("unsupported tensor file version " + std::to_string(version) +
            ": " + r.path.string());
  const std::uint8_t kind_code = r.u8();
  if (kind_code > 1)
    io_fail("bad scalar kind in tensor file: " + r.path.string());
  Header h;
  h.kind = kind_code == 0 ? ScalarKind::RealF64 : ScalarKind::ComplexF64;
  const std::uint64_t rank = r.u64();
  if (rank > 64)
    io_fail("implausible rank in tensor file: " + r.path.string());
  h.shape.resize(rank);
  for (std::uint64_t k = 0; k < rank; ++k)
    h.shape[k] = r.u64();
  return h;
}

std::string read_file(const std::filesystem::path &path, bool header_only) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    io_fail("cannot open tensor file: " + path.string());
  std::string buf;
  if (header_only) {
    buf.resize(4 + 4 + 1 + 8 + 64 * 8);
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    buf.resize(static_cast<std::size_t>(in.gcount()));
  } else {
    in.seekg(0, std::ios::end);
    buf.resize(static_cast<std::size_t>(in.tellg()));
    in.seekg(0);
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!in)
      io_fail("cannot read tensor file: " + path.string());
  }
  return buf;
}

} // namespace

IoStats io_stats() {
  return {g_payload_reads.load(), g_payload_writes.load(),
          g_header_reads.load()};
}

void reset_io_stats() {
  g_payload_reads = 0;
  g_payload_writes = 0;
  g_header_reads = 0;
}

void tensor_to_disk(const Tensor &t, const std::filesystem::path &path) {
  std::string buf;
  const std::size_t n = t.element_count();
  buf.reserve(17 + 8 * t.rank() + 8 * n * (t.is_complex() ? 2 : 1));
  buf.append("DMRJ");
  put_u32(buf, kTensorFileVersion);
  buf.push_back(t.is_complex() ? char(1) : char(0));
  put_u64(buf, t.rank());
  for (std::size_t d : t.shape())
    put_u64(buf, d);
  if (t.is_complex()) {
    for (cplx x : t.complex_data()) {
      put_f64(buf, x.real());
      put_f64(buf, x.imag());
    }
  } else {
    for (double x : t.real_data())
      put_f64(buf, x);
  }

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      io_fail("cannot open temporary file: " + tmp.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out)
      io_fail("cannot write tensor file: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    io_fail("cannot rename " + tmp.string() + " to " + path.string() + ": " +
            ec.message());
  ++g_payload_writes;
}

Tensor tensor_from_disk(const std::filesystem::path &path) {
  const std::string buf = read_file(path, false);
  Reader r{buf, 0, path};
  Header h = parse_header(r);
  const std::size_t n = shape_elements(h.shape);
  ++g_payload_reads;
  if (h.kind == ScalarKind::RealF64) {
    r.need(8 * n);
    std::vector<double> data(n);
    for (std::size_t i = 0; i < n; ++i)
      data[i] = r.f64();
    if (r.pos != buf.size())
      io_fail("trailing bytes in tensor file: " + path.string());
    return Tensor::from_data(std::move(h.shape), std::move(data));
  }
  r.need(16 * n);
  std::vector<cplx> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double re = r.f64();
    const double im = r.f64();
    data[i] = {re, im};
  }
  if (r.pos != buf.size())
    io_fail("trailing bytes in tensor file: " + path.string());
  return Tensor::from_data(std::move(h.shape), std::move(data));
}

ScalarKind tensor_kind_from_disk(const std::filesystem::path &path) {
  const std::string buf = read_file(path, true);
  Reader r{buf, 0, path};
  Header h = parse_header(r);
  ++g_header_reads;
  return h.kind;
}

std::filesystem::path site_file_name(const std::filesystem::path &dir,
                                     const std::string &label,
                                     std::size_t site,
                                     const std::string &ext) {
  char idx[8];
  std::snprintf(idx, sizeof(idx), "%04zu", site);
  return dir / (label + idx + ext);
}

namespace detail {

LargeChain::LargeChain(std::vector<std::filesystem::path> names,
                       ScalarKind kind)
    : names_(std::move(names)), kind_(kind) {}

Tensor LargeChain::site(std::size_t i) const {
  return tensor_from_disk(file(i));
}

void LargeChain::set_site(std::size_t i, Tensor t) {
  if (t.kind() != kind_)
    t = t.to_kind(kind_); // widening embeds; lossy narrowing throws
  tensor_to_disk(t, file(i));
}

const std::filesystem::path &LargeChain::file(std::size_t i) const {
  if (i < 1 || i > names_.size())
    throw std::out_of_range("tn: chain site index out of range");
  return names_[i - 1];
}

} // namespace detail

namespace {

template <class Chain>
std::vector<std::filesystem::path> write_chain(const Chain &src,
                                               const std::filesystem::path &dir,
                                               const std::string &label) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> names;
  names.reserve(src.length());
  for (std::size_t i = 1; i <= src.length(); ++i) {
    names.push_back(site_file_name(dir, label, i));
    tensor_to_disk(src.site(i), names.back());
  }
  return names;
}

std::vector<std::filesystem::path> scheme_names(std::size_t ns,
                                                const std::filesystem::path &dir,
                                                const std::string &label,
                                                const std::string &ext) {
  std::vector<std::filesystem::path> names;
  names.reserve(ns);
  for (std::size_t i = 1; i <= ns; ++i)
    names.push_back(site_file_name(dir, label, i, ext));
  return names;
}

ScalarKind verify_chain_files(const std::vector<std::filesystem::path> &names) {
  if (names.empty())
    io_fail("load: empty chain");
  ScalarKind chain_kind = ScalarKind::RealF64;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!std::filesystem::exists(names[i]))
      io_fail("load: missing site file " + names[i].string());
    const ScalarKind k = tensor_kind_from_disk(names[i]);
    if (i == 0)
      chain_kind = k;
    else if (k != chain_kind)
      io_fail("load: scalar kind differs across site files (" +
              names[i].string() + ")");
  }
  return chain_kind;
}

} // namespace

LargeMPS large_mps(const MPS &psi, const std::filesystem::path &dir,
                   const std::string &label) {
  return LargeMPS(write_chain(psi, dir, label), psi.kind(), psi.center());
}

LargeMPO large_mpo(const MPO &h, const std::filesystem::path &dir,
                   const std::string &label) {
  return LargeMPO(write_chain(h, dir, label), h.kind());
}

std::pair<LargeEnv, LargeEnv> large_env(const Environment &lenv,
                                        const Environment &renv,
                                        const std::filesystem::path &dir,
                                        const std::string &label) {
  ScalarKind kind = ScalarKind::RealF64;
  for (std::size_t i = 1; i <= lenv.length(); ++i)
    kind = promote(kind, lenv.site(i).kind());
  return {LargeEnv(write_chain(lenv, dir, label + "L_"), kind),
          LargeEnv(write_chain(renv, dir, label + "R_"), kind)};
}

LargeEnv large_env_slots(std::size_t ns, ScalarKind kind,
                         const std::filesystem::path &dir,
                         const std::string &label) {
  std::filesystem::create_directories(dir);
  return LargeEnv(scheme_names(ns, dir, label, kTensorFileExtension), kind);
}

MPS to_memory(const LargeMPS &psi) {
  std::vector<Tensor> sites;
  sites.reserve(psi.length());
  for (std::size_t i = 1; i <= psi.length(); ++i)
    sites.push_back(psi.site(i));
  return MPS(std::move(sites), psi.center());
}

MPO to_memory(const LargeMPO &h) {
  std::vector<Tensor> sites;
  sites.reserve(h.length());
  for (std::size_t i = 1; i <= h.length(); ++i)
    sites.push_back(h.site(i));
  return MPO(std::move(sites));
}

LargeMPS load_mps(std::size_t ns, const std::filesystem::path &dir,
                  const std::string &label, const std::string &ext,
                  std::size_t oc) {
  auto names = scheme_names(ns, dir, label, ext);
  const ScalarKind kind = verify_chain_files(names);
  return LargeMPS(std::move(names), kind, oc);
}

LargeMPO load_mpo(std::size_t ns, const std::filesystem::path &dir,
                  const std::string &label, const std::string &ext) {
  auto names = scheme_names(ns, dir, label, ext);
  const ScalarKind kind = verify_chain_files(names);
  return LargeMPO(std::move(names), kind);
}

LargeEnv load_lenv(std::size_t ns, const std::filesystem::path &dir,
                   const std::string &label, const std::string &ext) {
  auto names = scheme_names(ns, dir, label, ext);
  const ScalarKind kind = verify_chain_files(names);
  return LargeEnv(std::move(names), kind);
}

LargeEnv load_renv(std::size_t ns, const std::filesystem::path &dir,
                   const std::string &label, const std::string &ext) {
  auto names = scheme_names(ns, dir, label, ext);
  const ScalarKind kind = verify_chain_files(names);
  return LargeEnv(std::move(names), kind);
}

namespace {

template <class Chain>
std::vector<std::filesystem::path> copy_files(const Chain &src,
                                              const std::filesystem::path &dir,
                                              const std::string &label) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> names;
  names.reserve(src.length());
  for (std::size_t i = 1; i <= src.length(); ++i) {
    const std::filesystem::path dst = site_file_name(dir, label, i);
    if (std::filesystem::exists(dst) &&
        std::filesystem::equivalent(dst, src.file(i)))
      io_fail("copy_large: destination collides with the source: " +
              dst.string());
    tensor_to_disk(src.site(i), dst); // one read + one write per site
    names.push_back(dst);
  }
  return names;
}

} // namespace

LargeMPS copy_large(const LargeMPS &src, const std::filesystem::path &dir,
                    const std::string &label) {
  return LargeMPS(copy_files(src, dir, label), src.kind(), src.center());
}

LargeMPO copy_large(const LargeMPO &src, const std::filesystem::path &dir,
                    const std::string &label) {
  return LargeMPO(copy_files(src, dir, label), src.kind());
}

LargeEnv copy_large(const LargeEnv &src, const std::filesystem::path &dir,
                    const std::string &label) {
  return LargeEnv(copy_files(src, dir, label), src.kind());
}

GaugeReport gauge_move(LargeMPS &psi, Direction dir,
                       const TruncationSpec &trunc) {
  return detail::gauge_move_impl(psi, dir, trunc);
}

void move_center(LargeMPS &psi, std::size_t target,
                 const TruncationSpec &trunc) {
  detail::move_center_impl(psi, target, trunc);
}

} // namespace tn
