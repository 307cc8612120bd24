#include "mvge/embedding.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>

#include "mvge/errors.hpp"
#include "mvge/io_util.hpp"

namespace mvge {

namespace fs = std::filesystem;

namespace {

static_assert(std::endian::native == std::endian::little,
              "embedding binary I/O assumes a little-endian host");

void put_u32(std::string& out, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.append(b, 4);
}

std::uint32_t get_u32(const std::string& in, std::size_t off) {
  std::uint32_t v;
  std::memcpy(&v, in.data() + off, 4);
  return v;
}

}  // namespace

void save_embeddings_binary(const Matrix& m, const fs::path& path) {
  std::string out;
  out.reserve(kEmbeddingHeaderBytes + 4 * static_cast<std::size_t>(m.size()));
  out.append(kEmbeddingMagic, 4);
  put_u32(out, kEmbeddingVersion);
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const float f = static_cast<float>(m(i, j));
      char b[4];
      std::memcpy(b, &f, 4);
      out.append(b, 4);
    }
  }
  write_file_atomic(path, out);
}

Matrix load_embeddings_binary(const fs::path& path) {
  const std::string in = read_file(path);
  if (in.size() < kEmbeddingHeaderBytes || std::memcmp(in.data(), kEmbeddingMagic, 4) != 0) {
    throw ValidationError(path.string() + ": malformed embedding header");
  }
  if (get_u32(in, 4) != kEmbeddingVersion) {
    throw ValidationError(path.string() + ": unsupported embedding version " +
                          std::to_string(get_u32(in, 4)));
  }
  const std::size_t rows = get_u32(in, 8);
  const std::size_t cols = get_u32(in, 12);
  if (in.size() != kEmbeddingHeaderBytes + 4 * rows * cols) {
    throw ValidationError(path.string() + ": payload size does not match " +
                          std::to_string(rows) + "x" + std::to_string(cols));
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const char* p = in.data() + kEmbeddingHeaderBytes;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j, p += 4) {
      float f;
      std::memcpy(&f, p, 4);
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f;
    }
  }
  return m;
}

void save_embeddings_csv(const Matrix& m, const fs::path& path) {
  std::string out = "node";
  for (Eigen::Index j = 0; j < m.cols(); ++j) out += ",e" + std::to_string(j);
  out += '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += std::to_string(i);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, ",%.9g", m(i, j));
      out += buf;
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

Matrix load_embeddings_csv(const fs::path& path) {
  const std::string in = read_file(path);
  std::size_t pos = in.find('\n');
  if (pos == std::string::npos || in.compare(0, 4, "node") != 0) {
    throw ValidationError(path.string() + ": malformed CSV header");
  }
  const std::string header = in.substr(0, pos);
  std::size_t cols = 0;
  for (char c : header) cols += (c == ',');
  for (std::size_t j = 0; j < cols; ++j) {
    if (header.find(",e" + std::to_string(j)) == std::string::npos) {
      throw ValidationError(path.string() + ": malformed CSV header");
    }
  }
  std::vector<double> values;
  std::size_t rows = 0;
  ++pos;
  while (pos < in.size()) {
    std::size_t end = in.find('\n', pos);
    if (end == std::string::npos) end = in.size();
    std::string_view line(in.data() + pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      std::size_t fields = 0;
      std::size_t p = 0;
      while (true) {
        std::size_t comma = line.find(',', p);
        std::string_view tok = line.substr(p, comma == line.npos ? line.npos : comma - p);
        double v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
          throw ValidationError(path.string() + ": bad value '" + std::string(tok) + "'");
        }
        if (fields > 0) values.push_back(v);
        ++fields;
        if (comma == line.npos) break;
        p = comma + 1;
      }
      if (fields != cols + 1) {
        throw ValidationError(path.string() + ": row " + std::to_string(rows) +
                              " has wrong number of columns");
      }
      ++rows;
    }
    pos = end + 1;
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * cols + j];
    }
  }
  return m;
}

Matrix load_embeddings(const fs::path& path) {
  if (path.extension() == ".csv") return load_embeddings_csv(path);
  return load_embeddings_binary(path);
}

void save_embedding_set(const EmbeddingSet& e, const fs::path& dir, const std::string& stem) {
  fs::create_directories(dir);
  save_embeddings_binary(e.merged, dir / (stem + ".bin"));
  save_embeddings_csv(e.merged, dir / (stem + ".csv"));
  save_embeddings_binary(e.ego, dir / (stem + "_ego.bin"));
  save_embeddings_binary(e.agg, dir / (stem + "_agg.bin"));
}

EmbeddingSet load_embedding_set(const fs::path& dir, const std::string& stem) {
  EmbeddingSet e;
  e.merged = load_embeddings_binary(dir / (stem + ".bin"));
  e.ego = load_embeddings_binary(dir / (stem + "_ego.bin"));
  e.agg = load_embeddings_binary(dir / (stem + "_agg.bin"));
  if (e.ego.rows() != e.merged.rows() || e.agg.rows() != e.merged.rows()) {
    throw ValidationError(dir.string() + ": embedding files disagree on node count");
  }
  return e;
}

}  // namespace mvge
