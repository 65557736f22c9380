#include "hww2v/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

#include "hww2v/errors.hpp"

namespace hww2v {
namespace {

// Same generator as the reference word2vec tool; portable and cheap.
struct Lcg {
  std::uint64_t state;
  std::uint64_t next() {
    state = state * 25214903917ULL + 11ULL;
    return state;
  }
  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0); }
};

template <bool Shared>
inline float load(const float& x) {
  if constexpr (Shared) {
    return std::atomic_ref<float>(const_cast<float&>(x)).load(std::memory_order_relaxed);
  } else {
    return x;
  }
}

template <bool Shared>
inline void add(float& x, float delta) {
  if constexpr (Shared) {
    std::atomic_ref<float> ref(x);
    ref.store(ref.load(std::memory_order_relaxed) + delta, std::memory_order_relaxed);
  } else {
    x += delta;
  }
}

// log(1 + exp(-z)) without overflow.
double softplus_neg(double z) { return z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z)); }

struct TrainingState {
  std::uint32_t dim;
  std::vector<float> input;   // context (word) vectors, the returned embeddings
  std::vector<float> output;  // negative-sampling output vectors
  std::vector<double> noise_cdf;
  std::vector<std::vector<std::uint32_t>> sequences;
  std::vector<double> keep_prob;  // subsampling; empty when disabled
  std::uint64_t total_words = 0;
};

std::uint32_t sample_noise(const std::vector<double>& cdf, Lcg& rng) {
  const double u = rng.uniform() * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<std::uint32_t>(std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1));
}

struct WorkerResult {
  double loss = 0.0;
  std::uint64_t predictions = 0;
};

template <bool Shared>
WorkerResult train_sequences(TrainingState& st, const CbowConfig& cfg, std::size_t begin,
                             std::size_t end, Lcg& rng, std::atomic<std::uint64_t>& processed,
                             std::uint64_t total_planned) {
  const std::uint32_t dim = st.dim;
  std::vector<float> hidden(dim), grad(dim);
  std::vector<std::uint32_t> kept;
  WorkerResult res;
  std::uint64_t local = 0;
  double alpha = cfg.initial_lr;

  for (std::size_t s = begin; s < end; ++s) {
    const auto& seq = st.sequences[s];
    kept.clear();
    for (const auto w : seq) {
      if (!st.keep_prob.empty() && rng.uniform() >= st.keep_prob[w]) continue;
      kept.push_back(w);
    }
    local += seq.size();
    if (local >= 1000 || s + 1 == end) {
      const auto done = processed.fetch_add(local, std::memory_order_relaxed) + local;
      local = 0;
      const double progress = static_cast<double>(done) / static_cast<double>(total_planned + 1);
      alpha = std::max(cfg.initial_lr * (1.0 - progress), cfg.initial_lr * 1e-4);
    }

    const auto n = static_cast<std::int64_t>(kept.size());
    for (std::int64_t pos = 0; pos < n; ++pos) {
      const auto shrink = static_cast<std::int64_t>(rng.next() % cfg.window);
      const auto reach = static_cast<std::int64_t>(cfg.window) - shrink;
      std::fill(hidden.begin(), hidden.end(), 0.0f);
      std::fill(grad.begin(), grad.end(), 0.0f);
      std::uint32_t context = 0;
      for (auto c = pos - reach; c <= pos + reach; ++c) {
        if (c == pos || c < 0 || c >= n) continue;
        const float* v = &st.input[static_cast<std::size_t>(kept[c]) * dim];
        for (std::uint32_t k = 0; k < dim; ++k) hidden[k] += load<Shared>(v[k]);
        ++context;
      }
      if (context == 0) continue;
      const float inv = 1.0f / static_cast<float>(context);
      for (auto& h : hidden) h *= inv;

      const auto center = kept[pos];
      for (std::uint32_t d = 0; d <= cfg.negative_samples; ++d) {
        std::uint32_t target = center;
        double label = 1.0;
        if (d > 0) {
          target = sample_noise(st.noise_cdf, rng);
          if (target == center) continue;
          label = 0.0;
        }
        float* out = &st.output[static_cast<std::size_t>(target) * dim];
        double f = 0.0;
        for (std::uint32_t k = 0; k < dim; ++k) f += static_cast<double>(hidden[k]) * load<Shared>(out[k]);
        res.loss += label > 0 ? softplus_neg(f) : softplus_neg(-f);
        const double sigma = 1.0 / (1.0 + std::exp(-f));
        const auto g = static_cast<float>((label - sigma) * alpha);
        for (std::uint32_t k = 0; k < dim; ++k) grad[k] += g * load<Shared>(out[k]);
        for (std::uint32_t k = 0; k < dim; ++k) add<Shared>(out[k], g * hidden[k]);
      }
      ++res.predictions;
      for (auto c = pos - reach; c <= pos + reach; ++c) {
        if (c == pos || c < 0 || c >= n) continue;
        float* v = &st.input[static_cast<std::size_t>(kept[c]) * dim];
        for (std::uint32_t k = 0; k < dim; ++k) add<Shared>(v[k], grad[k]);
      }
    }
  }
  return res;
}

}  // namespace

DictionaryMatrix::DictionaryMatrix(std::uint32_t dim, std::vector<std::string> tokens, std::vector<float> values)
    : dim_(dim), tokens_(std::move(tokens)), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(dim_) * tokens_.size()) {
    throw ValidationError("dictionary matrix shape mismatch");
  }
  index_.reserve(tokens_.size());
  for (std::uint32_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], i).second) throw ValidationError("duplicate embedding token '" + tokens_[i] + "'");
  }
}

std::optional<std::uint32_t> DictionaryMatrix::find(std::string_view key) const {
  const auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool DictionaryMatrix::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](float v) { return std::isfinite(v); });
}

void DictionaryMatrix::save_text(std::ostream& out) const {
  out << size() << ' ' << dim_ << '\n';
  char buf[32];
  for (std::uint32_t i = 0; i < size(); ++i) {
    out << tokens_[i];
    for (const float v : vector(i)) {
      std::snprintf(buf, sizeof buf, " %.9g", static_cast<double>(v));
      out << buf;
    }
    out << '\n';
  }
}

DictionaryMatrix DictionaryMatrix::load_text(std::istream& in) {
  std::vector<std::string> tokens;
  std::vector<float> values;
  std::uint32_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    if (first) {
      first = false;
      std::uint64_t count = 0, d = 0;
      std::string rest;
      if ((fields >> count >> d) && !(fields >> rest)) {
        dim = static_cast<std::uint32_t>(d);
        continue;
      }
      fields.clear();
      fields.str(line);
    }
    std::string token;
    fields >> token;
    std::vector<float> row;
    float v = 0;
    while (fields >> v) row.push_back(v);
    if (!fields.eof()) throw ParseError("bad number in word vector row", line_no);
    if (dim == 0) dim = static_cast<std::uint32_t>(row.size());
    if (row.size() != dim || dim == 0) throw ParseError("word vector has wrong dimension", line_no);
    tokens.push_back(std::move(token));
    values.insert(values.end(), row.begin(), row.end());
  }
  return DictionaryMatrix(dim, std::move(tokens), std::move(values));
}

void CbowConfig::validate() const {
  if (dim == 0) throw ConfigError("embedding dim must be > 0");
  if (window < 1) throw ConfigError("window must be >= 1");
  if (negative_samples < 1) throw ConfigError("negative samples must be >= 1");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(initial_lr > 0)) throw ConfigError("initial learning rate must be > 0");
  if (min_count < 1) throw ConfigError("min_count must be >= 1");
  if (subsample < 0) throw ConfigError("subsample threshold must be >= 0");
}

DictionaryMatrix train_cbow(std::span<const PreparedDocument> docs, const CbowConfig& config, CbowReport* report) {
  config.validate();

  std::map<std::string, std::uint64_t> counts;
  for (const auto& doc : docs) {
    for (const auto& sentence : doc.sentences) {
      for (const auto& t : sentence) ++counts[t.key()];
    }
  }
  std::vector<std::string> tokens;
  std::vector<std::uint64_t> freq;
  std::unordered_map<std::string, std::uint32_t> index;
  for (const auto& [key, c] : counts) {
    if (c < config.min_count) continue;
    index.emplace(key, static_cast<std::uint32_t>(tokens.size()));
    tokens.push_back(key);
    freq.push_back(c);
  }
  if (tokens.empty()) throw ConfigError("no token reaches min_count; cannot train embeddings");

  TrainingState st;
  st.dim = config.dim;
  const std::size_t vocab = tokens.size();
  Lcg init{config.seed};
  st.input.resize(vocab * config.dim);
  for (auto& x : st.input) {
    x = static_cast<float>((init.uniform() - 0.5) / config.dim);
  }
  st.output.assign(vocab * config.dim, 0.0f);

  st.noise_cdf.resize(vocab);
  double acc = 0.0;
  for (std::size_t i = 0; i < vocab; ++i) {
    acc += std::pow(static_cast<double>(freq[i]), 0.75);
    st.noise_cdf[i] = acc;
  }

  for (const auto& doc : docs) {
    std::vector<std::uint32_t> seq;
    for (const auto& sentence : doc.sentences) {
      for (const auto& t : sentence) {
        if (auto it = index.find(t.key()); it != index.end()) seq.push_back(it->second);
      }
    }
    st.total_words += seq.size();
    if (!seq.empty()) st.sequences.push_back(std::move(seq));
  }

  if (config.subsample > 0) {
    st.keep_prob.resize(vocab);
    for (std::size_t i = 0; i < vocab; ++i) {
      const double ratio = static_cast<double>(freq[i]) / (config.subsample * static_cast<double>(st.total_words));
      st.keep_prob[i] = std::min(1.0, (std::sqrt(ratio) + 1.0) / ratio);
    }
  }

  const std::uint64_t planned = st.total_words * config.epochs;
  std::atomic<std::uint64_t> processed{0};
  const unsigned workers = std::max(1u, std::min<unsigned>(config.workers, st.sequences.size()));
  std::vector<Lcg> rngs;
  for (unsigned w = 0; w < workers; ++w) rngs.push_back(Lcg{config.seed * 7919ULL + w + 1});

  CbowReport local_report;
  local_report.words_per_epoch = st.total_words;
  for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
    WorkerResult total;
    if (workers == 1) {
      total = train_sequences<false>(st, config, 0, st.sequences.size(), rngs[0], processed, planned);
    } else {
      std::vector<WorkerResult> results(workers);
      std::vector<std::thread> threads;
      for (unsigned w = 0; w < workers; ++w) {
        const std::size_t b = st.sequences.size() * w / workers;
        const std::size_t e = st.sequences.size() * (w + 1) / workers;
        threads.emplace_back([&, w, b, e] {
          results[w] = train_sequences<true>(st, config, b, e, rngs[w], processed, planned);
        });
      }
      for (auto& t : threads) t.join();
      for (const auto& r : results) {
        total.loss += r.loss;
        total.predictions += r.predictions;
      }
    }
    local_report.epoch_loss.push_back(total.predictions ? total.loss / static_cast<double>(total.predictions) : 0.0);
  }
  if (report) *report = std::move(local_report);

  DictionaryMatrix m(config.dim, std::move(tokens), std::move(st.input));
  if (!m.all_finite()) throw ValidationError("embedding training diverged (non-finite values)");
  return m;
}

double tfidf_weight(std::uint32_t frequency, std::uint32_t total_docs, std::uint32_t doc_freq) {
  if (frequency == 0 || doc_freq == 0) return 0.0;
  return static_cast<double>(frequency) *
         std::log(static_cast<double>(total_docs) / static_cast<double>(doc_freq));
}

std::vector<double> weighted_doc_vector(const PreparedDocument& doc, const DictionaryMatrix& embeddings,
                                        const DocumentFrequencies& stats, bool normalize) {
  std::vector<double> s(embeddings.dim(), 0.0);
  std::map<std::string, std::uint32_t> freq;
  for (const auto& sentence : doc.sentences) {
    for (const auto& t : sentence) ++freq[t.key()];
  }
  double total_weight = 0.0;
  for (const auto& [key, f] : freq) {
    const auto idx = embeddings.find(key);
    if (!idx) continue;
    const double w = tfidf_weight(f, stats.total_docs(), stats.of(key));
    if (w == 0.0) continue;
    total_weight += w;
    const auto v = embeddings.vector(*idx);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] += w * static_cast<double>(v[k]);
  }
  if (normalize && total_weight > 0.0) {
    for (auto& x : s) x /= total_weight;
  }
  return s;
}

}  // namespace hww2v
