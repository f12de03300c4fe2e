// Copyright 2026 The GreenStore Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Stand-in external upscaler for tests. FAKE_UPSCALER_MODE selects:
//   ok      nearest-neighbour 4x (default)
//   fail    exit 3 without output
//   wrong   2x output
//   garbage non-PNG output
// FAKE_UPSCALER_LOG, when set, receives the input path.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "greenstore/archive.hpp"
#include "greenstore/png.hpp"
#include "greenstore/resample.hpp"

int main(int argc, char** argv) {
  if (argc != 3) return 2;
  const char* scale = std::getenv("GREENSTORE_SCALE");
  if (!scale || std::string(scale) != "4") return 4;
  if (const char* log = std::getenv("FAKE_UPSCALER_LOG")) std::ofstream(log) << argv[1];
  const char* env_mode = std::getenv("FAKE_UPSCALER_MODE");
  const std::string mode = env_mode ? env_mode : "ok";
  if (mode == "fail") return 3;
  std::ofstream out(argv[2], std::ios::binary);
  if (mode == "garbage") {
    out << "not a png";
    return 0;
  }
  const auto img = greenstore::decode_png(greenstore::read_file(argv[1]));
  const auto up = mode == "wrong" ? greenstore::resize_to(img, img.width() * 2, img.height() * 2)
                                  : greenstore::nearest_upscale_4x(img);
  const auto bytes = greenstore::encode_png(up);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  return 0;
}
