#include "hww2v/persistence.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string_view>

#include "hww2v/errors.hpp"

namespace hww2v {
namespace {

constexpr std::string_view kMagic = "HWW2V";

enum class Section : std::uint32_t {
  Metadata = 1,
  Vocabulary = 2,
  EmbeddingStats = 3,
  Embeddings = 4,
  SentimentRows = 5,
  SentimentFallback = 6,
  Classifier = 7,
};

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void boolean(bool v) { u8(v ? 1 : 0); }
  void str(std::string_view s) {
    u64(s.size());
    buf_.append(s);
  }
  void f64s(std::span<const double> v) {
    u64(v.size());
    for (const double d : v) f64(d);
  }
  void strs(std::span<const std::string> v) {
    u64(v.size());
    for (const auto& s : v) str(s);
  }
  std::string& bytes() { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  Reader(std::string_view data, std::string_view what) : data_(data), what_(what) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  float f32() { return std::bit_cast<float>(u32()); }
  bool boolean() { return u8() != 0; }
  std::string str() {
    const std::uint64_t n = count(1);
    std::string s(data_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::vector<double> f64s() {
    std::vector<double> v(count(8));
    for (auto& d : v) d = f64();
    return v;
  }
  std::vector<std::string> strs() {
    std::vector<std::string> v(count(8));
    for (auto& s : v) s = str();
    return v;
  }
  // Element count checked against the remaining bytes before allocating.
  std::uint64_t count(std::size_t min_bytes_each) {
    const std::uint64_t n = u64();
    if (min_bytes_each && n > (data_.size() - pos_) / min_bytes_each) fail();
    return n;
  }
  void finish() const {
    if (pos_ != data_.size()) throw FormatError(std::string(what_) + " section has trailing bytes");
  }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) fail();
  }
  [[noreturn]] void fail() const { throw FormatError(std::string(what_) + " section is truncated"); }

  std::string_view data_;
  std::string_view what_;
  std::size_t pos_ = 0;
};

void put_scores(Writer& w, const SentimentScores& s) {
  w.f64(s.positive);
  w.f64(s.objective);
  w.f64(s.negative);
  w.f64(s.unknown);
}

SentimentScores get_scores(Reader& r) {
  SentimentScores s;
  s.positive = r.f64();
  s.objective = r.f64();
  s.negative = r.f64();
  s.unknown = r.f64();
  return s;
}

void put_rows(Writer& w, const std::vector<std::pair<std::string, SentimentScores>>& rows) {
  w.u64(rows.size());
  for (const auto& [k, s] : rows) {
    w.str(k);
    put_scores(w, s);
  }
}

std::vector<std::pair<std::string, SentimentScores>> get_rows(Reader& r) {
  std::vector<std::pair<std::string, SentimentScores>> rows(r.count(40));
  for (auto& [k, s] : rows) {
    k = r.str();
    s = get_scores(r);
  }
  return rows;
}

void put_counts(Writer& w, std::uint32_t total, const std::vector<std::pair<std::string, std::uint32_t>>& counts) {
  w.u32(total);
  w.u64(counts.size());
  for (const auto& [k, n] : counts) {
    w.str(k);
    w.u32(n);
  }
}

std::vector<std::pair<std::string, std::uint32_t>> get_counts(Reader& r) {
  std::vector<std::pair<std::string, std::uint32_t>> counts(r.count(12));
  for (auto& [k, n] : counts) {
    k = r.str();
    n = r.u32();
  }
  return counts;
}

void put_feature(Writer& w, const FeatureVector& v) {
  w.u32(v.dim);
  w.u32(v.dense_offset);
  w.u64(v.sparse.size());
  for (const auto& e : v.sparse) {
    w.u32(e.index);
    w.f64(e.value);
  }
  w.f64s(v.dense);
}

FeatureVector get_feature(Reader& r) {
  FeatureVector v;
  v.dim = r.u32();
  v.dense_offset = r.u32();
  v.sparse.resize(r.count(12));
  for (auto& e : v.sparse) {
    e.index = r.u32();
    e.value = r.f64();
  }
  v.dense = r.f64s();
  return v;
}

void put_classifier(Writer& w, const TrainedClassifier& c) {
  w.u32(static_cast<std::uint32_t>(c.kind));
  w.boolean(c.converged);
  w.boolean(c.shift.has_value());
  if (c.shift) {
    w.u32(c.shift->dense_offset());
    w.f64s(c.shift->offsets());
  }
  w.u32(static_cast<std::uint32_t>(c.model.index()));
  if (const auto* nb = std::get_if<NaiveBayesModel>(&c.model)) {
    w.u32(nb->dim);
    for (std::size_t k = 0; k < 2; ++k) w.f64(nb->log_prior[k]);
    for (std::size_t k = 0; k < 2; ++k) w.f64s(nb->log_cond[k]);
  } else if (const auto* me = std::get_if<MaxEntModel>(&c.model)) {
    w.u32(me->dim);
    for (std::size_t k = 0; k < 2; ++k) w.f64s(me->weights[k]);
    for (std::size_t k = 0; k < 2; ++k) w.f64(me->bias[k]);
    w.f64(me->l2);
    w.boolean(me->converged);
    w.u32(me->iterations);
    w.f64(me->gradient_norm);
  } else {
    const auto& sv = std::get<SvmModel>(c.model);
    w.u32(static_cast<std::uint32_t>(sv.kernel.kind));
    w.f64(sv.kernel.gamma);
    w.u64(sv.kernel.cache_mb);
    w.f64(sv.C);
    w.u64(sv.support_vectors.size());
    for (const auto& v : sv.support_vectors) put_feature(w, v);
    w.f64s(sv.alpha);
    w.u64(sv.labels.size());
    for (const int y : sv.labels) w.u8(y > 0 ? 1 : 0);
    w.f64(sv.bias);
    w.boolean(sv.converged);
    w.u64(sv.iterations);
  }
}

TrainedClassifier get_classifier(Reader& r) {
  TrainedClassifier c;
  const std::uint32_t kind = r.u32();
  if (kind > static_cast<std::uint32_t>(ClassifierKind::SvmRbf)) throw FormatError("unknown classifier kind");
  c.kind = static_cast<ClassifierKind>(kind);
  c.converged = r.boolean();
  if (r.boolean()) {
    const std::uint32_t offset = r.u32();
    c.shift = FeatureShift(offset, r.f64s());
  }
  switch (r.u32()) {
    case 0: {
      NaiveBayesModel nb;
      nb.dim = r.u32();
      for (std::size_t k = 0; k < 2; ++k) nb.log_prior[k] = r.f64();
      for (std::size_t k = 0; k < 2; ++k) nb.log_cond[k] = r.f64s();
      c.model = std::move(nb);
      break;
    }
    case 1: {
      MaxEntModel me;
      me.dim = r.u32();
      for (std::size_t k = 0; k < 2; ++k) me.weights[k] = r.f64s();
      for (std::size_t k = 0; k < 2; ++k) me.bias[k] = r.f64();
      me.l2 = r.f64();
      me.converged = r.boolean();
      me.iterations = r.u32();
      me.gradient_norm = r.f64();
      c.model = std::move(me);
      break;
    }
    case 2: {
      SvmModel sv;
      const std::uint32_t kk = r.u32();
      if (kk > static_cast<std::uint32_t>(KernelKind::Rbf)) throw FormatError("unknown kernel kind");
      sv.kernel.kind = static_cast<KernelKind>(kk);
      sv.kernel.gamma = r.f64();
      sv.kernel.cache_mb = r.u64();
      sv.C = r.f64();
      sv.support_vectors.resize(r.count(24));
      for (auto& v : sv.support_vectors) v = get_feature(r);
      sv.alpha = r.f64s();
      sv.labels.resize(r.count(1));
      for (auto& y : sv.labels) y = r.u8() ? 1 : -1;
      sv.bias = r.f64();
      sv.converged = r.boolean();
      sv.iterations = r.u64();
      c.model = std::move(sv);
      break;
    }
    default:
      throw FormatError("unknown classifier model type");
  }
  return c;
}

void put_metadata(Writer& w, const ModelMetadata& m) {
  w.u32(static_cast<std::uint32_t>(m.representation));
  w.u32(static_cast<std::uint32_t>(m.scaling));
  w.boolean(m.normalize_pool);
  w.strs(m.stopwords);
  w.strs(m.negation_cues);
  w.boolean(m.negation_toggle);
  w.boolean(m.keep_punctuation_tokens);
  w.str(m.lexicon_version);
}

ModelMetadata get_metadata(Reader& r) {
  ModelMetadata m;
  const std::uint32_t rep = r.u32();
  if (rep > static_cast<std::uint32_t>(Representation::Hybrid)) throw FormatError("unknown representation");
  m.representation = static_cast<Representation>(rep);
  const std::uint32_t sc = r.u32();
  if (sc > static_cast<std::uint32_t>(Scaling::UnitL2)) throw FormatError("unknown scaling");
  m.scaling = static_cast<Scaling>(sc);
  m.normalize_pool = r.boolean();
  m.stopwords = r.strs();
  m.negation_cues = r.strs();
  m.negation_toggle = r.boolean();
  m.keep_punctuation_tokens = r.boolean();
  m.lexicon_version = r.str();
  return m;
}

struct Container {
  std::vector<std::pair<Section, std::string>> sections;

  void add(Section kind, Writer&& w) { sections.emplace_back(kind, std::move(w.bytes())); }
};

void write_container(const Container& c, const std::filesystem::path& path) {
  Writer head;
  for (const char ch : kMagic) head.u8(static_cast<std::uint8_t>(ch));
  head.u32(kModelFormatVersion);
  head.u32(static_cast<std::uint32_t>(c.sections.size()));
  std::uint64_t offset = kMagic.size() + 4 + 4 + c.sections.size() * 20;
  for (const auto& [kind, bytes] : c.sections) {
    head.u32(static_cast<std::uint32_t>(kind));
    head.u64(offset);
    head.u64(bytes.size());
    offset += bytes.size();
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(head.bytes().data(), static_cast<std::streamsize>(head.bytes().size()));
  for (const auto& [kind, bytes] : c.sections) out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("failed writing " + path.string());
}

struct LoadedContainer {
  std::string data;
  std::vector<std::pair<Section, std::string_view>> sections;

  std::optional<std::string_view> find(Section kind) const {
    for (const auto& [k, v] : sections) {
      if (k == kind) return v;
    }
    return std::nullopt;
  }
};

LoadedContainer read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model file " + path.string());
  LoadedContainer c;
  c.data.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  if (c.data.size() < kMagic.size() || std::string_view(c.data).substr(0, kMagic.size()) != kMagic) {
    throw FormatError(path.string() + " is not an HWW2V model file (bad magic)");
  }
  Reader r(std::string_view(c.data).substr(kMagic.size()), "header");
  const std::uint32_t version = r.u32();
  if (version != kModelFormatVersion) {
    throw FormatError(path.string() + ": model format version " + std::to_string(version) +
                      " is not supported (this build reads version " + std::to_string(kModelFormatVersion) + ")");
  }
  const std::uint32_t n = r.u32();
  std::uint64_t end = kMagic.size() + 8 + static_cast<std::uint64_t>(n) * 20;
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto kind = static_cast<Section>(r.u32());
    const std::uint64_t offset = r.u64();
    const std::uint64_t length = r.u64();
    if (offset > c.data.size() || length > c.data.size() - offset) {
      throw FormatError(path.string() + ": section extends past end of file");
    }
    end = std::max(end, offset + length);
    c.sections.emplace_back(kind, std::string_view(c.data).substr(offset, length));
  }
  if (end != c.data.size()) throw FormatError(path.string() + ": trailing bytes after the last section");
  return c;
}

Writer vocabulary_section(const Vocabulary& v) {
  Writer w;
  std::vector<std::pair<std::string, std::uint32_t>> entries;
  for (std::uint32_t i = 0; i < v.size(); ++i) entries.emplace_back(v.token(i), v.doc_freq(i));
  put_counts(w, v.total_docs(), entries);
  return w;
}

Vocabulary read_vocabulary(std::string_view bytes) {
  Reader r(bytes, "vocabulary");
  const std::uint32_t total = r.u32();
  auto entries = get_counts(r);
  r.finish();
  return Vocabulary::from_entries(total, std::move(entries));
}

Writer embeddings_section(const DictionaryMatrix& m) {
  Writer w;
  w.u32(m.dim());
  w.strs(m.tokens());
  w.u64(m.values().size());
  for (const float f : m.values()) w.f32(f);
  return w;
}

DictionaryMatrix read_embeddings(std::string_view bytes) {
  Reader r(bytes, "embeddings");
  const std::uint32_t dim = r.u32();
  auto tokens = r.strs();
  std::vector<float> values(r.count(4));
  for (auto& f : values) f = r.f32();
  r.finish();
  if (values.size() != static_cast<std::size_t>(dim) * tokens.size()) throw FormatError("embedding matrix shape mismatch");
  return DictionaryMatrix(dim, std::move(tokens), std::move(values));
}

}  // namespace

ModelMetadata ModelMetadata::from(const PrepConfig& prep) {
  ModelMetadata m;
  m.stopwords.assign(prep.stopwords.begin(), prep.stopwords.end());
  std::sort(m.stopwords.begin(), m.stopwords.end());
  m.negation_cues.assign(prep.negation_cues.begin(), prep.negation_cues.end());
  std::sort(m.negation_cues.begin(), m.negation_cues.end());
  m.negation_toggle = prep.negation_toggle;
  m.keep_punctuation_tokens = prep.keep_punctuation_tokens;
  return m;
}

PrepConfig ModelMetadata::prep_config() const {
  PrepConfig p;
  p.stopwords.insert(stopwords.begin(), stopwords.end());
  p.negation_cues.insert(negation_cues.begin(), negation_cues.end());
  p.negation_toggle = negation_toggle;
  p.keep_punctuation_tokens = keep_punctuation_tokens;
  return p;
}

RepresentationComponents ModelBundle::components() const {
  RepresentationComponents c;
  c.vocabulary = vocabulary ? &*vocabulary : nullptr;
  c.embedding_stats = embedding_stats ? &*embedding_stats : nullptr;
  c.embeddings = embeddings ? &*embeddings : nullptr;
  c.sentiment = sentiment ? &*sentiment : nullptr;
  c.normalize_pool = metadata.normalize_pool;
  return c;
}

void save_bundle(const ModelBundle& b, const std::filesystem::path& path) {
  Container c;
  {
    Writer w;
    put_metadata(w, b.metadata);
    c.add(Section::Metadata, std::move(w));
  }
  if (b.vocabulary) c.add(Section::Vocabulary, vocabulary_section(*b.vocabulary));
  if (b.embedding_stats) {
    Writer w;
    put_counts(w, b.embedding_stats->total_docs(), b.embedding_stats->sorted());
    c.add(Section::EmbeddingStats, std::move(w));
  }
  if (b.embeddings) c.add(Section::Embeddings, embeddings_section(*b.embeddings));
  if (b.sentiment) {
    Writer w;
    put_rows(w, b.sentiment->sorted_rows());
    c.add(Section::SentimentRows, std::move(w));
    if (const auto& fb = b.sentiment->fallback()) {
      Writer f;
      put_rows(f, fb->sorted());
      c.add(Section::SentimentFallback, std::move(f));
    }
  }
  if (b.classifier) {
    Writer w;
    put_classifier(w, *b.classifier);
    c.add(Section::Classifier, std::move(w));
  }
  write_container(c, path);
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  const LoadedContainer c = read_container(path);
  ModelBundle b;
  if (auto s = c.find(Section::Metadata)) {
    Reader r(*s, "metadata");
    b.metadata = get_metadata(r);
    r.finish();
  }
  if (auto s = c.find(Section::Vocabulary)) b.vocabulary = read_vocabulary(*s);
  if (auto s = c.find(Section::EmbeddingStats)) {
    Reader r(*s, "embedding statistics");
    const std::uint32_t total = r.u32();
    auto counts = get_counts(r);
    r.finish();
    b.embedding_stats = DocumentFrequencies::from_counts(total, std::move(counts));
  }
  if (auto s = c.find(Section::Embeddings)) b.embeddings = read_embeddings(*s);
  if (auto s = c.find(Section::SentimentRows)) {
    Reader r(*s, "sentiment rows");
    auto rows = get_rows(r);
    r.finish();
    std::shared_ptr<const LexiconIndex> fallback;
    if (auto f = c.find(Section::SentimentFallback)) {
      Reader fr(*f, "sentiment fallback");
      auto frows = get_rows(fr);
      fr.finish();
      fallback = std::make_shared<const LexiconIndex>(LexiconIndex::from_rows(std::move(frows)));
    }
    b.sentiment = SentimentMatrix::from_rows(std::move(rows), std::move(fallback));
  }
  if (auto s = c.find(Section::Classifier)) {
    Reader r(*s, "classifier");
    b.classifier = get_classifier(r);
    r.finish();
  }
  return b;
}

void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path) {
  Container c;
  c.add(Section::Vocabulary, vocabulary_section(vocab));
  write_container(c, path);
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  const LoadedContainer c = read_container(path);
  const auto s = c.find(Section::Vocabulary);
  if (!s) throw FormatError(path.string() + " holds no vocabulary");
  return read_vocabulary(*s);
}

void save_embeddings(const DictionaryMatrix& m, const std::filesystem::path& path) {
  Container c;
  c.add(Section::Embeddings, embeddings_section(m));
  write_container(c, path);
}

DictionaryMatrix load_embeddings(const std::filesystem::path& path) {
  const LoadedContainer c = read_container(path);
  const auto s = c.find(Section::Embeddings);
  if (!s) throw FormatError(path.string() + " holds no embeddings");
  return read_embeddings(*s);
}

}  // namespace hww2v
