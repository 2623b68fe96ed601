// SPDX-License-Identifier: Apache-2.0

#include "starris/nn/checkpoint.hpp"

#include "starris/params.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace starris::nn {

namespace {

constexpr char kMagic[8] = {'S', 'R', 'I', 'S', 'Q', 'N', 'E', 'T'};

class Writer {
 public:
  void u32(std::uint32_t v) { le(v); }
  void i32(std::int32_t v) { le(static_cast<std::uint32_t>(v)); }
  void u64(std::uint64_t v) { le(v); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v)); }
  void raw(const char* p, std::size_t n) { out.append(p, n); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    raw(s.data(), s.size());
  }
  std::string out;

 private:
  template <typename U>
  void le(U v) {
    for (std::size_t k = 0; k < sizeof(U); ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
  }
};

class Reader {
 public:
  explicit Reader(std::string_view b) : bytes_(b) {}
  std::uint32_t u32() { return le<std::uint32_t>(); }
  std::int32_t i32() { return static_cast<std::int32_t>(le<std::uint32_t>()); }
  std::uint64_t u64() { return le<std::uint64_t>(); }
  double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }
  std::string raw(std::size_t n) {
    need(n);
    std::string s(bytes_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::string str() { return raw(u32()); }
  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw FormatError("checkpoint truncated");
  }
  template <typename U>
  U le() {
    need(sizeof(U));
    U v = 0;
    for (std::size_t k = 0; k < sizeof(U); ++k)
      v |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + k])) << (8 * k);
    pos_ += sizeof(U);
    return v;
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_checkpoint(const NetworkSpec& spec, const ParamSet& params) {
  Writer w;
  w.raw(kMagic, sizeof(kMagic));
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(spec.trunk));
  w.i32(spec.n_tokens);
  w.i32(spec.token_width);
  w.i32(spec.embed_width);
  w.i32(spec.res_blocks);
  w.i32(spec.heads);
  w.i32(spec.fusion_width);
  w.u32(static_cast<std::uint32_t>(spec.head_sizes.size()));
  for (int h : spec.head_sizes) w.i32(h);
  w.u32(static_cast<std::uint32_t>(params.tensors.size()));
  for (std::size_t k = 0; k < params.tensors.size(); ++k) {
    const Tensor& t = params.tensors[k];
    w.str(params.names[k]);
    w.u32(static_cast<std::uint32_t>(t.rank()));
    for (int d : t.shape()) w.i32(d);
    for (double v : t.values()) w.f64(v);
  }
  w.u64(fnv1a64(w.out));
  return w.out;
}

void decode_checkpoint(const std::string& bytes, NetworkSpec& spec, ParamSet& params) {
  if (bytes.size() < sizeof(kMagic) + 12) throw FormatError("checkpoint too short");
  const std::string_view body(bytes.data(), bytes.size() - 8);
  Reader tail(std::string_view(bytes).substr(bytes.size() - 8));
  if (tail.u64() != fnv1a64(body)) throw FormatError("checkpoint checksum mismatch");

  Reader r(body);
  if (r.raw(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic))) throw FormatError("not a network checkpoint");
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) throw FormatError("unsupported checkpoint version " + std::to_string(version));
  NetworkSpec s;
  const std::uint32_t trunk = r.u32();
  if (trunk > static_cast<std::uint32_t>(Trunk::Attention)) throw FormatError("unknown trunk id");
  s.trunk = static_cast<Trunk>(trunk);
  s.n_tokens = r.i32();
  s.token_width = r.i32();
  s.embed_width = r.i32();
  s.res_blocks = r.i32();
  s.heads = r.i32();
  s.fusion_width = r.i32();
  const std::uint32_t n_heads = r.u32();
  if (n_heads > 1u << 20) throw FormatError("implausible head count");
  for (std::uint32_t k = 0; k < n_heads; ++k) s.head_sizes.push_back(r.i32());
  ParamSet p;
  const std::uint32_t n_tensors = r.u32();
  if (n_tensors > 1u << 20) throw FormatError("implausible tensor count");
  for (std::uint32_t k = 0; k < n_tensors; ++k) {
    p.names.push_back(r.str());
    const std::uint32_t rank = r.u32();
    if (rank > 8) throw FormatError("implausible tensor rank");
    std::vector<int> shape;
    for (std::uint32_t d = 0; d < rank; ++d) {
      const int dim = r.i32();
      if (dim < 0) throw FormatError("negative tensor dimension");
      shape.push_back(dim);
    }
    const std::size_t n = shape_size(shape);
    if (n > bytes.size() / 8) throw FormatError("tensor larger than the file");
    std::vector<double> values(n);
    for (auto& v : values) v = r.f64();
    p.tensors.emplace_back(std::move(shape), std::move(values));
  }
  if (!r.at_end()) throw FormatError("trailing bytes in checkpoint");
  try {
    s.validate();
  } catch (const ShapeMismatch& e) {
    throw FormatError(std::string("checkpoint network spec invalid: ") + e.what());
  }
  spec = std::move(s);
  params = std::move(p);
}

void save_checkpoint(const std::string& path, const QNetwork& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  const std::string bytes = encode_checkpoint(net.spec(), net.params());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write to '" + path + "' failed");
}

QNetwork load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  NetworkSpec spec;
  ParamSet params;
  decode_checkpoint(ss.str(), spec, params);
  QNetwork net(spec, 0);
  if (net.params().names != params.names) throw FormatError("checkpoint tensors do not match the network layout");
  for (std::size_t k = 0; k < params.tensors.size(); ++k)
    if (net.params().tensors[k].shape() != params.tensors[k].shape())
      throw FormatError("checkpoint tensor '" + params.names[k] + "' has the wrong shape");
  net.params() = std::move(params);
  return net;
}

}  // namespace starris::nn
