// io.hpp - scene description files and the tensor container format
//
// Scene files are flat key-value text with [afdm], [array] and [target.i]
// sections, SI units throughout (radians, meters, seconds, Hz). Tensors go
// into a small self-describing binary: magic "AFDMTNSR", version, dims,
// flags, then little-endian interleaved re/im doubles in the documented
// (g fastest, then m, then k) storage order, optionally followed by the
// transmit frame.

#pragma once

#include <optional>
#include <string>

#include "afdm/config.hpp"
#include "afdm/scene.hpp"
#include "afdm/tensor.hpp"
#include "afdm/waveform.hpp"

namespace afdm {

struct SceneFile {
  AfdmConfig cfg;
  SceneConfig scene;
};

SceneFile load_scene(const std::string& path);
SceneFile parse_scene(const std::string& text);
std::string format_scene(const AfdmConfig& cfg, const SceneConfig& scene);
void save_scene(const std::string& path, const AfdmConfig& cfg,
                const SceneConfig& scene);

struct TensorFile {
  Tensor3 tensor;
  std::optional<CVec> frame;
};

void write_tensor(const std::string& path, const Tensor3& t,
                  const CVec* frame = nullptr);
TensorFile read_tensor(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace afdm
