#include "afdm/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace afdm {
namespace {

constexpr char kMagic[8] = {'A', 'F', 'D', 'M', 'T', 'N', 'S', 'R'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kFlagFrame = 1u;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key) {
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::runtime_error("scene: bad numeric value for '" + key + "': " + v);
  }
}

int parse_int(const std::string& v, const std::string& key) {
  const double d = parse_double(v, key);
  const int i = static_cast<int>(std::llround(d));
  if (std::abs(d - i) > 1e-9)
    throw std::runtime_error("scene: expected integer for '" + key + "'");
  return i;
}

using Section = std::map<std::string, std::string>;

}  // namespace

SceneFile parse_scene(const std::string& text) {
  std::map<std::string, Section> sections;
  std::vector<std::string> target_order;
  std::string current;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("scene: malformed section header at line " +
                                 std::to_string(lineno));
      current = trim(line.substr(1, line.size() - 2));
      if (sections.count(current))
        throw std::runtime_error("scene: duplicate section [" + current + "]");
      sections[current] = {};
      if (current.rfind("target.", 0) == 0) target_order.push_back(current);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || current.empty())
      throw std::runtime_error("scene: expected 'key = value' at line " +
                               std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (sections[current].count(key))
      throw std::runtime_error("scene: duplicate key '" + key + "' in [" + current + "]");
    sections[current][key] = val;
  }

  const auto take = [](Section& s, const std::string& key,
                       const char* section) -> std::string {
    auto it = s.find(key);
    if (it == s.end())
      throw std::runtime_error(std::string("scene: missing key '") + key + "' in [" +
                               section + "]");
    std::string v = it->second;
    s.erase(it);
    return v;
  };
  const auto expect_empty = [](const Section& s, const std::string& name) {
    if (!s.empty())
      throw std::runtime_error("scene: unknown key '" + s.begin()->first + "' in [" +
                               name + "]");
  };

  if (!sections.count("afdm")) throw std::runtime_error("scene: missing [afdm] section");
  if (!sections.count("array")) throw std::runtime_error("scene: missing [array] section");
  if (target_order.empty()) throw std::runtime_error("scene: no [target.i] sections");

  SceneFile out;
  {
    Section& s = sections["afdm"];
    const int n_sub = parse_int(take(s, "n_sub", "afdm"), "n_sub");
    const int alpha_max = parse_int(take(s, "alpha_max", "afdm"), "alpha_max");
    const int k_v = parse_int(take(s, "k_v", "afdm"), "k_v");
    const int ell_max = parse_int(take(s, "ell_max", "afdm"), "ell_max");
    const int l_cpp = parse_int(take(s, "l_cpp", "afdm"), "l_cpp");
    double c2 = 0.0;
    if (s.count("c2")) c2 = parse_double(take(s, "c2", "afdm"), "c2");
    const double delta_f = parse_double(take(s, "delta_f", "afdm"), "delta_f");
    const double fc = parse_double(take(s, "fc", "afdm"), "fc");
    expect_empty(s, "afdm");
    out.cfg = AfdmConfig::make(n_sub, alpha_max, k_v, ell_max, l_cpp, c2, delta_f, fc);
  }
  {
    Section& s = sections["array"];
    out.scene.fc = out.cfg.fc;
    out.scene.delta_f = out.cfg.delta_f;
    out.scene.k_tx = parse_int(take(s, "k_tx", "array"), "k_tx");
    out.scene.gx = parse_int(take(s, "gx", "array"), "gx");
    if (s.count("d_rx")) out.scene.d_rx = parse_double(take(s, "d_rx", "array"), "d_rx");
    if (s.count("d_tx")) out.scene.d_tx = parse_double(take(s, "d_tx", "array"), "d_tx");
    expect_empty(s, "array");
  }
  for (const std::string& name : target_order) {
    Section& s = sections[name];
    Target t;
    t.theta = parse_double(take(s, "theta", name.c_str()), "theta");
    t.phi = parse_double(take(s, "phi", name.c_str()), "phi");
    t.range = parse_double(take(s, "range", name.c_str()), "range");
    t.tau = parse_double(take(s, "tau", name.c_str()), "tau");
    t.f_d = parse_double(take(s, "f_d", name.c_str()), "f_d");
    const double re = parse_double(take(s, "gamma_re", name.c_str()), "gamma_re");
    const double im = parse_double(take(s, "gamma_im", name.c_str()), "gamma_im");
    t.gamma = Complex(re, im);
    expect_empty(s, name);
    out.scene.targets.push_back(t);
  }
  validate_scene(out.scene, out.cfg);
  return out;
}

SceneFile load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scene: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str());
}

std::string format_scene(const AfdmConfig& cfg, const SceneConfig& scene) {
  std::ostringstream os;
  os.precision(17);
  os << "[afdm]\n";
  os << "n_sub = " << cfg.n_sub << "\n";
  os << "alpha_max = " << cfg.alpha_max << "\n";
  os << "k_v = " << cfg.k_v << "\n";
  os << "ell_max = " << cfg.ell_max << "\n";
  os << "l_cpp = " << cfg.l_cpp << "\n";
  os << "c2 = " << cfg.c2 << "\n";
  os << "delta_f = " << cfg.delta_f << "\n";
  os << "fc = " << cfg.fc << "\n\n";
  os << "[array]\n";
  os << "k_tx = " << scene.k_tx << "\n";
  os << "gx = " << scene.gx << "\n";
  if (scene.d_rx > 0.0) os << "d_rx = " << scene.d_rx << "\n";
  if (scene.d_tx > 0.0) os << "d_tx = " << scene.d_tx << "\n";
  for (size_t i = 0; i < scene.targets.size(); ++i) {
    const Target& t = scene.targets[i];
    os << "\n[target." << (i + 1) << "]\n";
    os << "theta = " << t.theta << "\n";
    os << "phi = " << t.phi << "\n";
    if (std::isfinite(t.range))
      os << "range = " << t.range << "\n";
    else
      os << "range = inf\n";
    os << "tau = " << t.tau << "\n";
    os << "f_d = " << t.f_d << "\n";
    os << "gamma_re = " << t.gamma.real() << "\n";
    os << "gamma_im = " << t.gamma.imag() << "\n";
  }
  return os.str();
}

void save_scene(const std::string& path, const AfdmConfig& cfg,
                const SceneConfig& scene) {
  write_text_file(path, format_scene(cfg, scene));
}

void write_tensor(const std::string& path, const Tensor3& t, const CVec* frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("tensor: cannot open '" + path + "' for writing");
  out.write(kMagic, sizeof(kMagic));
  const std::uint32_t version = kVersion;
  const std::uint32_t dims[3] = {static_cast<std::uint32_t>(t.dim_g()),
                                 static_cast<std::uint32_t>(t.dim_n()),
                                 static_cast<std::uint32_t>(t.dim_k())};
  const std::uint32_t flags = frame != nullptr ? kFlagFrame : 0u;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  out.write(reinterpret_cast<const char*>(&flags), sizeof(flags));
  out.write(reinterpret_cast<const char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(Complex)));
  if (frame != nullptr) {
    const std::uint32_t len = static_cast<std::uint32_t>(frame->size());
    out.write(reinterpret_cast<const char*>(&len), sizeof(len));
    out.write(reinterpret_cast<const char*>(frame->data()),
              static_cast<std::streamsize>(frame->size() * sizeof(Complex)));
  }
  if (!out) throw std::runtime_error("tensor: write failed for '" + path + "'");
}

TensorFile read_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("tensor: cannot open '" + path + "'");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("tensor: bad magic in '" + path + "'");
  std::uint32_t version = 0, flags = 0;
  std::uint32_t dims[3] = {0, 0, 0};
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  in.read(reinterpret_cast<char*>(&flags), sizeof(flags));
  if (!in || version != kVersion)
    throw std::runtime_error("tensor: unsupported container version");
  TensorFile out;
  out.tensor = Tensor3(static_cast<int>(dims[0]), static_cast<int>(dims[1]),
                       static_cast<int>(dims[2]));
  in.read(reinterpret_cast<char*>(out.tensor.data()),
          static_cast<std::streamsize>(out.tensor.size() * sizeof(Complex)));
  if (flags & kFlagFrame) {
    std::uint32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof(len));
    CVec frame(len);
    in.read(reinterpret_cast<char*>(frame.data()),
            static_cast<std::streamsize>(len * sizeof(Complex)));
    out.frame = frame;
  }
  if (!in) throw std::runtime_error("tensor: truncated file '" + path + "'");
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace afdm
