#include "mkg/embed.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>

#include "mkg/error.hpp"
#include "mkg/rng.hpp"
#include "mkg/text.hpp"

namespace mkg::embed {

namespace {

void normalize(std::span<double> v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) return;
  for (double& x : v) x /= norm;
}

bool is_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

template <typename T>
void write_pod(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool read_pod(std::istream& in, T& value) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&value), sizeof(T)));
}

constexpr char kMagic[8] = {'M', 'K', 'G', 'E', 'M', 'B', '0', '1'};

}  // namespace

Vector trigram_vector(std::string_view word, std::size_t dim, std::uint64_t seed) {
  Vector v(dim, 0.0);
  const std::string padded = "<" + std::string(word) + ">";
  const std::size_t grams = padded.size() >= 3 ? padded.size() - 2 : 1;
  for (std::size_t i = 0; i < grams; ++i) {
    const auto gram = std::string_view(padded).substr(i, 3);
    Rng rng(text::fnv1a(gram, seed));
    for (double& x : v) x += rng.uniform(-1.0, 1.0);
  }
  normalize(v);
  return v;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(u.size()) + " vs " + std::to_string(v.size()));
  }
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

Embedder::Embedder(EmbedConfig config) : config_(config) {
  if (config_.dim == 0) throw Error(ErrorKind::InvalidArgument, "dim must be > 0");
}

std::uint64_t Embedder::hash_corpus(const std::vector<std::string>& corpus,
                                    const EmbedConfig& config) {
  std::uint64_t h = text::fnv1a("mkg-embed", config.seed);
  for (const auto& doc : corpus) {
    h = text::fnv1a(doc, h);
    h = text::fnv1a("\n", h);
  }
  h = text::fnv1a(std::to_string(config.dim) + "/" + std::to_string(config.window) +
                      "/" + std::to_string(config.min_count) + "/" +
                      std::to_string(config.iterations),
                  h);
  return h;
}

Embedder Embedder::train(const std::vector<std::string>& corpus, EmbedConfig config) {
  Embedder e(config);
  e.corpus_hash_ = hash_corpus(corpus, config);

  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.size());
  std::map<std::string, std::size_t> counts;
  for (const auto& doc : corpus) {
    docs.push_back(text::tokenize(doc));
    for (const auto& tok : docs.back()) ++counts[tok];
  }
  for (const auto& [word, count] : counts) {
    if (count >= config.min_count) e.words_.push_back(word);
  }
  for (std::size_t i = 0; i < e.words_.size(); ++i) e.index_[e.words_[i]] = i;
  const auto vocab = static_cast<Eigen::Index>(e.words_.size());
  if (vocab == 0) return e;

  // Symmetric co-occurrence counts within the window.
  std::map<std::pair<std::size_t, std::size_t>, double> cooc;
  for (const auto& doc : docs) {
    std::vector<std::ptrdiff_t> ids;
    ids.reserve(doc.size());
    for (const auto& tok : doc) {
      auto it = e.index_.find(tok);
      ids.push_back(it == e.index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second));
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] < 0) continue;
      const std::size_t end = std::min(ids.size(), i + config.window + 1);
      for (std::size_t j = i + 1; j < end; ++j) {
        if (ids[j] < 0 || ids[j] == ids[i]) continue;
        const auto a = static_cast<std::size_t>(ids[i]);
        const auto b = static_cast<std::size_t>(ids[j]);
        cooc[{a, b}] += 1.0;
        cooc[{b, a}] += 1.0;
      }
    }
  }

  std::vector<double> row_sum(e.words_.size(), 0.0);
  double total = 0.0;
  for (const auto& [key, c] : cooc) {
    row_sum[key.first] += c;
    total += c;
  }
  std::vector<Eigen::Triplet<double>> entries;
  for (const auto& [key, c] : cooc) {
    const double pmi = std::log(c * total / (row_sum[key.first] * row_sum[key.second]));
    if (pmi > 0.0) {
      entries.emplace_back(static_cast<int>(key.first), static_cast<int>(key.second), pmi);
    }
  }
  Eigen::SparseMatrix<double> ppmi(vocab, vocab);
  ppmi.setFromTriplets(entries.begin(), entries.end());

  // Seeded subspace iteration for the dominant rank-k subspace.
  const auto k = static_cast<Eigen::Index>(std::min<std::size_t>(config.dim, e.words_.size()));
  Rng rng(config.seed);
  Eigen::MatrixXd q(vocab, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    for (Eigen::Index r = 0; r < vocab; ++r) q(r, c) = rng.uniform(-1.0, 1.0);
  }
  for (std::size_t it = 0; it < config.iterations; ++it) {
    Eigen::MatrixXd y = ppmi * q;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    q = qr.householderQ() * Eigen::MatrixXd::Identity(vocab, k);
  }
  const Eigen::MatrixXd reduced = ppmi * q;

  e.table_.assign(e.words_.size() * config.dim, 0.0);
  for (Eigen::Index r = 0; r < vocab; ++r) {
    std::span<double> row(e.table_.data() + static_cast<std::size_t>(r) * config.dim,
                          config.dim);
    for (Eigen::Index c = 0; c < k; ++c) row[static_cast<std::size_t>(c)] = reduced(r, c);
    if (is_zero(row)) {
      // No positive co-occurrence evidence: the word keeps its trigram vector.
      const Vector fallback =
          trigram_vector(e.words_[static_cast<std::size_t>(r)], config.dim, config.seed);
      std::copy(fallback.begin(), fallback.end(), row.begin());
    }
    normalize(row);
  }
  return e;
}

bool Embedder::in_vocabulary(std::string_view word) const {
  return index_.count(text::to_lower(word)) > 0;
}

Vector Embedder::word_vector(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return trigram_vector(word, config_.dim, config_.seed);
  const double* row = table_.data() + it->second * config_.dim;
  return Vector(row, row + config_.dim);
}

Vector Embedder::embed(std::string_view phrase) const {
  const auto trimmed = text::trim(phrase);
  if (trimmed.empty()) throw Error(ErrorKind::EmptyPhrase, "");
  auto tokens = text::tokenize(trimmed);
  if (tokens.empty()) tokens.push_back(text::to_lower(trimmed));

  Vector sum(config_.dim, 0.0);
  for (const auto& tok : tokens) {
    const Vector v = word_vector(tok);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[i];
  }
  normalize(sum);
  if (is_zero(sum)) sum[0] = 1.0;
  return sum;
}

void Embedder::save_cache(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  write_pod<std::uint64_t>(out, corpus_hash_);
  write_pod<std::uint64_t>(out, config_.seed);
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(config_.dim));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(config_.window));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(words_.size()));
  for (std::size_t i = 0; i < words_.size(); ++i) {
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(words_[i].size()));
    out.write(words_[i].data(), static_cast<std::streamsize>(words_[i].size()));
    out.write(reinterpret_cast<const char*>(table_.data() + i * config_.dim),
              static_cast<std::streamsize>(config_.dim * sizeof(double)));
  }
  if (!out) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

std::optional<Embedder> Embedder::load_cache(const std::filesystem::path& path,
                                             std::uint64_t corpus_hash,
                                             std::uint64_t seed, std::size_t dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorKind::MalformedFile, "bad embedding cache magic in " + path.string());
  }
  std::uint64_t file_hash = 0, file_seed = 0;
  std::uint32_t file_dim = 0, window = 0, vocab = 0;
  if (!read_pod(in, file_hash) || !read_pod(in, file_seed) || !read_pod(in, file_dim) ||
      !read_pod(in, window) || !read_pod(in, vocab)) {
    throw Error(ErrorKind::MalformedFile, "truncated embedding cache header");
  }
  if (file_hash != corpus_hash || file_seed != seed || file_dim != dim) return std::nullopt;

  EmbedConfig config;
  config.dim = dim;
  config.seed = seed;
  config.window = window;
  Embedder e(config);
  e.corpus_hash_ = corpus_hash;
  e.table_.resize(static_cast<std::size_t>(vocab) * dim);
  for (std::uint32_t i = 0; i < vocab; ++i) {
    std::uint32_t len = 0;
    if (!read_pod(in, len)) throw Error(ErrorKind::MalformedFile, "truncated cache");
    std::string word(len, '\0');
    in.read(word.data(), len);
    in.read(reinterpret_cast<char*>(e.table_.data() + static_cast<std::size_t>(i) * dim),
            static_cast<std::streamsize>(dim * sizeof(double)));
    if (!in) throw Error(ErrorKind::MalformedFile, "truncated cache");
    e.index_[word] = i;
    e.words_.push_back(std::move(word));
  }
  return e;
}

namespace {

void check_points(std::span<const Vector> points) {
  for (const auto& p : points) {
    if (p.size() != points.front().size()) {
      throw Error(ErrorKind::DimensionMismatch, "points differ in dimension");
    }
  }
}

std::vector<std::size_t> neighbors_of(std::span<const Vector> points, std::size_t i,
                                      double eps) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (j == i || 1.0 - cosine(points[i], points[j]) <= eps) out.push_back(j);
  }
  return out;
}

}  // namespace

std::vector<std::vector<std::size_t>> neighborhoods(std::span<const Vector> points,
                                                    double eps) {
  check_points(points);
  std::vector<std::vector<std::size_t>> out(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        neighbors_of(points, static_cast<std::size_t>(i), eps);
  }
  return out;
}

std::vector<std::vector<std::size_t>> neighborhoods_serial(
    std::span<const Vector> points, double eps) {
  check_points(points);
  std::vector<std::vector<std::size_t>> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = neighbors_of(points, i, eps);
  return out;
}

std::vector<int> dbscan_labels(std::span<const Vector> points, double eps,
                               std::size_t min_pts) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorKind::InvalidEps, std::to_string(eps));
  }
  if (min_pts < 1) throw Error(ErrorKind::InvalidMinPts, "minPts must be >= 1");
  if (points.empty()) return {};

  constexpr int kUnvisited = -2;
  const auto hood = neighborhoods(points, eps);
  std::vector<int> labels(points.size(), kUnvisited);
  int cluster = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (labels[i] != kUnvisited) continue;
    if (hood[i].size() < min_pts) {
      labels[i] = kNoise;
      continue;
    }
    labels[i] = cluster;
    std::vector<std::size_t> frontier(hood[i].begin(), hood[i].end());
    for (std::size_t q = 0; q < frontier.size(); ++q) {
      const std::size_t j = frontier[q];
      if (labels[j] == kNoise) labels[j] = cluster;
      if (labels[j] != kUnvisited) continue;
      labels[j] = cluster;
      if (hood[j].size() >= min_pts) {
        frontier.insert(frontier.end(), hood[j].begin(), hood[j].end());
      }
    }
    ++cluster;
  }
  return labels;
}

std::vector<ClusterAssignment> dbscan(std::span<const Vector> points, double eps,
                                      std::size_t min_pts) {
  const auto labels = dbscan_labels(points, eps, min_pts);
  const int clusters =
      labels.empty() ? 0 : std::max(0, *std::max_element(labels.begin(), labels.end()) + 1);
  std::vector<ClusterAssignment> out(static_cast<std::size_t>(clusters));
  for (int c = 0; c < clusters; ++c) out[static_cast<std::size_t>(c)].cluster_id = c;
  ClusterAssignment noise;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == kNoise) {
      noise.members.push_back(i);
    } else {
      out[static_cast<std::size_t>(labels[i])].members.push_back(i);
    }
  }
  if (!noise.members.empty()) out.push_back(std::move(noise));
  return out;
}

}  // namespace mkg::embed
