#include "gumorph/model_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "gumorph/error.hpp"

namespace gumorph {

namespace {

constexpr std::array<char, 8> kMagic = {'G', 'U', 'M', 'O', 'R', 'P', 'H', '\0'};
constexpr std::uint64_t kMaxCount = std::uint64_t{1} << 32;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  void str(const std::string& s) {
    u64(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  void le(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  double f64() { return std::bit_cast<double>(le(8)); }
  std::uint64_t count() {
    const auto n = u64();
    if (n > kMaxCount) throw FormatError("model file: implausible element count");
    return n;
  }
  std::string str() {
    std::string s(count(), '\0');
    in_.read(s.data(), static_cast<std::streamsize>(s.size()));
    if (!in_) throw FormatError("model file truncated");
    return s;
  }

 private:
  std::uint64_t le(int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
      const int c = in_.get();
      if (c == std::char_traits<char>::eof()) throw FormatError("model file truncated");
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
  }
  std::istream& in_;
};

}  // namespace

void write_model(std::ostream& out, const ModelFile& model) {
  const auto& p = model.params;
  p.validate();
  Writer w(out);
  out.write(kMagic.data(), kMagic.size());
  w.u32(kModelFormatVersion);
  w.u8(static_cast<std::uint8_t>(p.head));
  w.u8(model.pos ? 1 : 0);
  w.u8(model.pos ? static_cast<std::uint8_t>(*model.pos) : 0);

  const auto& h = p.hyper;
  w.u64(h.embed_dim);
  w.u64(h.hidden_dim);
  w.u64(h.batch);
  w.u64(h.epochs);
  w.u64(h.seed);
  w.f64(h.lr);
  w.f64(h.threshold);
  w.f64(h.clip_norm);
  w.u64(p.outputs);

  w.u64(p.vocab.units().size());
  for (const Unit u : p.vocab.units()) w.u32(static_cast<std::uint32_t>(u));

  w.u64(model.classes.size());
  for (const auto& c : model.classes) w.str(c);

  const auto tensors = p.weights.named();
  w.u64(tensors.size());
  for (const auto& [name, t] : tensors) {
    w.str(name);
    w.u64(t->shape.size());
    for (const auto d : t->shape) w.u64(d);
    for (const double v : t->data) w.f64(v);
  }
  if (!out) throw IoError("model write failed");
}

ModelFile read_model(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw FormatError("not a model file");
  Reader r(in);
  if (const auto version = r.u32(); version != kModelFormatVersion) {
    throw FormatError("unsupported model format version " + std::to_string(version));
  }
  ModelFile m;
  const auto head = r.u8();
  if (head > 1) throw FormatError("unknown model head");
  const bool has_pos = r.u8() != 0;
  const auto pos = r.u8();
  if (pos > 2) throw FormatError("unknown POS in model file");
  if (has_pos) m.pos = static_cast<Pos>(pos);

  nn::Hyperparams h;
  h.embed_dim = r.u64();
  h.hidden_dim = r.u64();
  h.batch = r.u64();
  h.epochs = r.u64();
  h.seed = r.u64();
  h.lr = r.f64();
  h.threshold = r.f64();
  h.clip_norm = r.f64();
  const auto outputs = r.u64();

  std::vector<Unit> units(r.count());
  for (auto& u : units) u = static_cast<Unit>(r.u32());
  Vocab vocab = Vocab::from_units(units);

  m.classes.resize(r.count());
  for (auto& c : m.classes) c = r.str();

  m.params = nn::ModelParams::zeros(static_cast<nn::Head>(head), std::move(vocab), outputs, h);
  auto tensors = m.params.weights.named();
  if (r.count() != tensors.size()) throw FormatError("model file has the wrong number of tensors");
  for (auto& [name, t] : tensors) {
    if (r.str() != name) throw FormatError("model file tensor order differs, expected " + name);
    std::vector<std::size_t> shape(r.count());
    for (auto& d : shape) d = r.u64();
    if (shape != t->shape) throw FormatError("tensor " + name + " has the wrong shape");
    for (auto& v : t->data) v = r.f64();
  }
  return m;
}

void save_model(const std::string& path, const ModelFile& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  write_model(out, model);
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_model(in);
}

}  // namespace gumorph
