#pragma once

#include <cstdint>
#include <filesystem>

#include "mvge/matrix.hpp"

namespace mvge {

// Per-node embeddings of the two views and the merged matrix H.
struct EmbeddingSet {
  Matrix ego;
  Matrix agg;
  Matrix merged;
};

inline constexpr char kEmbeddingMagic[4] = {'M', 'V', 'G', 'E'};
inline constexpr std::uint32_t kEmbeddingVersion = 1;
inline constexpr std::size_t kEmbeddingHeaderBytes = 16;

// Binary layout: "MVGE", u32 version, u32 rows, u32 cols (all little-endian),
// then rows*cols float32 LE values row-major.
void save_embeddings_binary(const Matrix& m, const std::filesystem::path& path);
Matrix load_embeddings_binary(const std::filesystem::path& path);

// CSV with header "node,e0,...,e{dim-1}"; values printed with 9 significant digits.
void save_embeddings_csv(const Matrix& m, const std::filesystem::path& path);
Matrix load_embeddings_csv(const std::filesystem::path& path);

// Dispatches on extension: ".csv" reads CSV, anything else the binary format.
Matrix load_embeddings(const std::filesystem::path& path);

// Writes merged/ego/agg as <stem>.bin/.csv, <stem>_ego.bin, <stem>_agg.bin.
void save_embedding_set(const EmbeddingSet& e, const std::filesystem::path& dir,
                        const std::string& stem = "embeddings");
EmbeddingSet load_embedding_set(const std::filesystem::path& dir,
                                const std::string& stem = "embeddings");

}  // namespace mvge
