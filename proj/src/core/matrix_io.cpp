/*
 * Copyright (c) 2026, The seqmix Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "seqmix/harness.hpp"

namespace seqmix {

RealMat read_matrix(std::istream &in) {
  long long rows = -1, cols = -1;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) throw IoError("matrix file: malformed 'rows cols' header");
  const auto r = static_cast<std::size_t>(rows), c = static_cast<std::size_t>(cols);
  std::vector<double> data(r * c);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!(in >> data[i])) {
      throw IoError("matrix file: expected " + std::to_string(data.size()) + " values, read " + std::to_string(i));
    }
  }
  std::string extra;
  if (in >> extra) throw IoError("matrix file: trailing data '" + extra + "'");
  return RealMat(r, c, std::move(data));
}

RealMat load_matrix(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read matrix file '" + path + "'");
  return read_matrix(in);
}

void write_matrix(std::ostream &out, const RealMat &m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  char buf[32];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
      if (c != 0) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

void save_matrix(const std::string &path, const RealMat &m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write matrix file '" + path + "'");
  write_matrix(out, m);
  if (!out) throw IoError("failed writing matrix file '" + path + "'");
}

}  // namespace seqmix
