#include "dynstr/blocked.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dynstr {

namespace {

void check_pair_roles(const DynamicString& pattern, const DynamicString& text) {
  if (pattern.role() != Target::pattern || text.role() != Target::text)
    throw std::invalid_argument("arguments must be a pattern and a text, in that order");
  if (!(pattern.alphabet() == text.alphabet()))
    throw std::invalid_argument("pattern and text must share an alphabet");
  if (pattern.size() > text.size())
    throw std::invalid_argument("pattern must not be longer than the text");
}

}  // namespace

BlockedStructure::BlockedStructure(const DynamicString& pattern, const DynamicString& text,
                                   LocalFn fn, UpdateModel model, LazyMode mode)
    : fn_(fn), model_(model), pattern_(pattern), text_(text), m_(pattern.size()) {
  check_pair_roles(pattern, text);
  size_t n = text.size();
  // Blocks of length 2m stride m apart; the last one absorbs the tail so its
  // length stays in [m, 2m]. n < 2m degenerates to a single block.
  size_t block_cnt = std::max<size_t>(1, (n + m_ - 1) / m_ - 1);
  blocks_.reserve(block_cnt);
  block_start_.reserve(block_cnt);
  for (size_t b = 0; b < block_cnt; ++b) {
    size_t start = b * m_ + 1;
    size_t end = (b + 1 == block_cnt) ? n : b * m_ + 2 * m_;
    block_start_.push_back(start);
    auto w = text.window(start, end - start + 1);
    DynamicString block_text(Target::text, text.alphabet(),
                             std::vector<Symbol>(w.begin(), w.end()));
    blocks_.emplace_back(pattern, std::move(block_text), fn, mode);
  }
}

size_t BlockedStructure::block_of_alignment(size_t i) const {
  return std::min((i - 1) / m_, blocks_.size() - 1);
}

void BlockedStructure::update_pattern(size_t position, Symbol s) {
  if (model_ == UpdateModel::text_only)
    throw std::logic_error("pattern updates are disabled in the text-only model");
  pattern_.apply_update(position, s);
  uint64_t work = 0;
  for (auto& blk : blocks_) {
    blk.update(Target::pattern, position, s);
    work += blk.counters().work_units_last_op;
  }
  ++counters_.updates;
  note_op(work, blocks_.size());
}

void BlockedStructure::update_text(size_t position, Symbol s) {
  text_.apply_update(position, s);
  // At most two blocks contain a text position; candidates are the block the
  // position's stride falls in and its predecessor, clamped to the last block.
  size_t last = blocks_.size() - 1;
  size_t c1 = std::min((position - 1) / m_, last);
  size_t c0 = c1 == 0 ? c1 : std::min(((position - 1) / m_) - 1, last);
  uint64_t work = 0;
  size_t touched = 0;
  size_t cands[2] = {c0, c1};
  size_t cand_cnt = c0 == c1 ? 1 : 2;
  for (size_t k = 0; k < cand_cnt; ++k) {
    size_t b = cands[k];
    size_t start = block_start_[b];
    size_t end = start + blocks_[b].text_len() - 1;
    if (position < start || position > end) continue;
    blocks_[b].update(Target::text, position - start + 1, s);
    work += blocks_[b].counters().work_units_last_op;
    ++touched;
  }
  ++counters_.updates;
  note_op(work, touched);
}

int64_t BlockedStructure::query(size_t i) const {
  if (i == 0 || i > alignments())
    throw std::out_of_range("alignment " + std::to_string(i) + " out of range 1.." +
                            std::to_string(alignments()));
  size_t b = block_of_alignment(i);
  int64_t v = blocks_[b].query(i - block_start_[b] + 1);
  ++counters_.queries;
  note_op(blocks_[b].counters().work_units_last_op, 1);
  return v;
}

int64_t BlockedStructure::query_mod(size_t i, uint32_t modulus) const {
  if (modulus == 0) throw std::invalid_argument("modulus must be positive");
  int64_t r = query(i) % static_cast<int64_t>(modulus);
  if (r < 0) r += modulus;
  return r;
}

void BlockedStructure::note_op(uint64_t work, size_t blocks) const {
  counters_.work_units_last_op = work;
  counters_.work_units_total += work;
  counters_.blocks_touched_last = blocks;
  uint64_t rb = 0;
  for (const auto& blk : blocks_) rb += blk.counters().rebuilds_total;
  counters_.rebuilds_total = rb;
}

DynHd::DynHd(const DynamicString& pattern, const DynamicString& text, UpdateModel model,
             LazyMode mode)
    : core_(pattern, text, LocalFn::hamming, model, mode) {}

DynIp::DynIp(const DynamicString& pattern, const DynamicString& text, UpdateModel model,
             LazyMode mode)
    : core_(pattern, text, LocalFn::inner_product, model, mode) {}

Symbol DynEm::Codec::encode(Symbol s) {
  if (s == Alphabet::wildcard) return s;
  auto it = to_rank.find(s);
  if (it != to_rank.end()) return it->second;
  if (next_rank > rank_cap)
    throw std::overflow_error(
        "distinct-symbol budget exhausted: exact wildcard scoring at this "
        "pattern length supports at most " +
        std::to_string(rank_cap) + " distinct symbols");
  to_rank.emplace(s, next_rank);
  return next_rank++;
}

DynEm::DynEm(const DynamicString& pattern, const DynamicString& text, UpdateModel model,
             LazyMode mode) {
  check_pair_roles(pattern, text);
  const Alphabet& a = pattern.alphabet();
  if (!a.wildcard_enabled())
    throw std::invalid_argument("wildcard matching needs a wildcard-enabled alphabet");
  size_t m = pattern.size();
  if (coefficient_fits(a.max_symbol(), 4, m)) {
    core_.emplace(pattern, text, LocalFn::em_weighted, model, mode);
    return;
  }
  // Declared alphabet too large for exact scoring: remap the symbols that
  // actually occur to dense ranks. Ranks are append-only, so updates never
  // invalidate snapshots; the match flag survives because the map is
  // injective and fixes the wildcard.
  uint32_t cap = 1;
  while (coefficient_fits(static_cast<unsigned __int128>(cap) + 1, 4, m)) ++cap;
  codec_.emplace();
  codec_->rank_cap = cap;
  raw_p_.emplace(pattern);
  raw_t_.emplace(text);
  Alphabet enc(AlphabetKind::polynomial, cap, true);
  std::vector<Symbol> ep, et;
  ep.reserve(pattern.size());
  et.reserve(text.size());
  for (Symbol s : pattern.data()) ep.push_back(codec_->encode(s));
  for (Symbol s : text.data()) et.push_back(codec_->encode(s));
  core_.emplace(DynamicString(Target::pattern, enc, std::move(ep)),
                DynamicString(Target::text, enc, std::move(et)), LocalFn::em_weighted, model,
                mode);
}

void DynEm::update_pattern(size_t position, Symbol s) {
  if (!codec_) {
    core_->update_pattern(position, s);
    return;
  }
  raw_p_->apply_update(position, s);
  core_->update_pattern(position, codec_->encode(s));
}

void DynEm::update_text(size_t position, Symbol s) {
  if (!codec_) {
    core_->update_text(position, s);
    return;
  }
  raw_t_->apply_update(position, s);
  core_->update_text(position, codec_->encode(s));
}

const DynamicString& DynEm::pattern() const {
  return codec_ ? *raw_p_ : core_->pattern();
}

const DynamicString& DynEm::text() const { return codec_ ? *raw_t_ : core_->text(); }

}  // namespace dynstr
