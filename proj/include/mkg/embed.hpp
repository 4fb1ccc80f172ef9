#pragma once

// Phrase embeddings and density clustering.
//
// A trained Embedder holds one vector per vocabulary word, obtained from
// positive PMI co-occurrence statistics reduced by seeded subspace
// iteration. Words outside the vocabulary (and every word of an untrained
// Embedder) fall back to the mean of hashed character-trigram vectors.
// Phrase vectors are the normalized mean of their word vectors.
//
// Cache file layout (little-endian):
//   char[8]  magic "MKGEMB01"
//   u64      corpus hash
//   u64      seed
//   u32      dimension d
//   u32      co-occurrence window
//   u32      vocabulary size V
//   V times: u32 byte length, UTF-8 word bytes, d x f64 components

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mkg::embed {

using Vector = std::vector<double>;

struct EmbedConfig {
  std::size_t dim = 100;
  std::uint64_t seed = 42;
  std::size_t window = 5;
  std::size_t min_count = 1;
  std::size_t iterations = 8;
};

class Embedder {
 public:
  explicit Embedder(EmbedConfig config = {});

  // Each corpus entry is one document; co-occurrence never crosses entries.
  static Embedder train(const std::vector<std::string>& corpus,
                        EmbedConfig config = {});

  // Unit-norm vector of length dim(). Throws Error(EmptyPhrase).
  Vector embed(std::string_view phrase) const;

  bool in_vocabulary(std::string_view word) const;
  std::size_t dim() const { return config_.dim; }
  std::size_t vocabulary_size() const { return words_.size(); }
  std::uint64_t corpus_hash() const { return corpus_hash_; }
  const EmbedConfig& config() const { return config_; }

  void save_cache(const std::filesystem::path& path) const;
  // Returns nullopt when the file is missing or was built for a different
  // (corpus hash, seed, dim) key.
  static std::optional<Embedder> load_cache(const std::filesystem::path& path,
                                            std::uint64_t corpus_hash,
                                            std::uint64_t seed, std::size_t dim);

  static std::uint64_t hash_corpus(const std::vector<std::string>& corpus,
                                   const EmbedConfig& config);

 private:
  Vector word_vector(const std::string& word) const;

  EmbedConfig config_;
  std::uint64_t corpus_hash_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> table_;  // words_.size() x dim, rows unit norm
};

// Unit vector from the hashed character trigrams of `word`.
Vector trigram_vector(std::string_view word, std::size_t dim, std::uint64_t seed);

// Standard cosine clamped to [-1, 1]; 0 when either vector is zero.
// Throws Error(DimensionMismatch).
double cosine(std::span<const double> u, std::span<const double> v);

inline constexpr int kNoise = -1;

struct ClusterAssignment {
  int cluster_id = kNoise;
  std::vector<std::size_t> members;  // ascending
};

// Indices within cosine distance `eps` of each point (self included),
// ascending. OpenMP-parallel over points.
std::vector<std::vector<std::size_t>> neighborhoods(std::span<const Vector> points,
                                                    double eps);
// Single-threaded reference for the kernel above.
std::vector<std::vector<std::size_t>> neighborhoods_serial(
    std::span<const Vector> points, double eps);

// Per-point cluster id (0, 1, ...) or kNoise. Clusters are numbered in the
// order their first core point appears; a border point belongs to the
// first cluster that reaches it. Throws Error(InvalidEps / InvalidMinPts).
std::vector<int> dbscan_labels(std::span<const Vector> points, double eps,
                               std::size_t min_pts);

// Clusters in id order, followed by one kNoise entry when noise exists.
std::vector<ClusterAssignment> dbscan(std::span<const Vector> points, double eps,
                                      std::size_t min_pts);

}  // namespace mkg::embed
