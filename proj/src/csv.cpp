#include "tomosc/csv.hpp"

#include <cstdio>
#include <fstream>

#include "tomosc/errors.hpp"

namespace tomosc::io {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void append_meta(std::string& out, const Metadata& meta) {
  for (const auto& [key, value] : meta) out += "# " + key + ": " + value + "\n";
}

}  // namespace

std::string wavefunction_csv(const states::WaveFunctionGrid& psi, const Metadata& meta) {
  std::string out;
  append_meta(out, meta);
  out += "x,re,im\n";
  for (int i = 0; i < psi.size(); ++i) {
    out += format_full(psi.x(i));
    out += ',';
    out += format_full(psi[i].real());
    out += ',';
    out += format_full(psi[i].imag());
    out += '\n';
  }
  return out;
}

std::string wigner_csv(const phasespace::WignerGrid& w, const Metadata& meta) {
  std::string out;
  append_meta(out, meta);
  out += "q,p,w\n";
  const GridSpec2D& g = w.spec();
  for (int iq = 0; iq < g.n_q; ++iq) {
    const std::string qs = format_full(g.q(iq));
    for (int ip = 0; ip < g.n_p; ++ip) {
      out += qs;
      out += ',';
      out += format_full(g.p(ip));
      out += ',';
      out += format_full(w.value(iq, ip));
      out += '\n';
    }
  }
  return out;
}

std::string tomogram_csv(const tomography::TomogramSlice& slice, const Metadata& meta) {
  std::string out;
  append_meta(out, meta);
  out += "X,density\n";
  const GridSpec1D& g = slice.grid();
  for (int i = 0; i < g.n_points; ++i) {
    out += format_full(g.point(i));
    out += ',';
    out += format_full(slice[i]);
    out += '\n';
  }
  return out;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("atomic_write: cannot open " + tmp.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw Error("atomic_write: short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("fnv1a64_file: cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return fnv1a64(bytes);
}

}  // namespace tomosc::io
