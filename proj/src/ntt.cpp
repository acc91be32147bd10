#include "dynstr/ntt.hpp"

#include <bit>
#include <stdexcept>

namespace dynstr {

MontgomeryField::MontgomeryField(uint32_t mod) : mod_(mod) {
  // mod must be an odd prime below 2^31
  uint32_t inv = mod;
  for (int i = 0; i < 4; ++i) inv *= 2 - mod * inv;  // inv = mod^{-1} mod 2^32
  neg_inv_ = ~inv + 1;
  r2_ = static_cast<uint32_t>((static_cast<unsigned __int128>(1) << 64) % mod);
  one_ = reduce(r2_);
}

NttTables::NttTables(uint32_t p, uint32_t generator) : field(p), prime(p) {
  two_adicity = std::countr_zero(p - 1);
  uint32_t g = field.to_rep(generator);
  root[two_adicity] = field.pow(g, (p - 1) >> two_adicity);
  iroot[two_adicity] = field.pow(root[two_adicity], p - 2);
  for (int k = two_adicity; k > 0; --k) {
    root[k - 1] = field.mul(root[k], root[k]);
    iroot[k - 1] = field.mul(iroot[k], iroot[k]);
  }
}

const std::vector<const NttTables*>& ntt_primes() {
  static const NttTables t0(998244353, 3);   // 119 * 2^23 + 1
  static const NttTables t1(167772161, 3);   // 5 * 2^25 + 1
  static const NttTables t2(469762049, 3);   // 7 * 2^26 + 1
  static const std::vector<const NttTables*> all = {&t0, &t1, &t2};
  return all;
}

void ResumableNtt::reset(std::vector<uint32_t>* data, const NttTables* tables, Dir dir) {
  data_ = data;
  tables_ = tables;
  dir_ = dir;
  n_ = data->size();
  log_n_ = static_cast<int>(std::countr_zero(n_));
  stage_ = 0;
  t_ = 0;
  done_ = n_ <= 1;
}

uint64_t ResumableNtt::advance(uint64_t budget) {
  if (done_ || budget == 0) return 0;
  const MontgomeryField& f = tables_->field;
  auto& a = *data_;
  const size_t half_total = n_ >> 1;
  uint64_t used = 0;
  while (!done_ && used < budget) {
    // Forward visits block sizes n, n/2, ..., 2; inverse visits 2, 4, ..., n.
    int k = dir_ == Dir::forward ? log_n_ - stage_ : stage_ + 1;
    const size_t len = static_cast<size_t>(1) << k;
    const size_t h = len >> 1;
    const uint32_t wlen = dir_ == Dir::forward ? tables_->root[k] : tables_->iroot[k];
    size_t block = t_ / h;
    size_t j = t_ % h;
    uint32_t w = j == 0 ? f.one() : f.pow(wlen, j);
    while (t_ < half_total && used < budget) {
      const size_t base = block * len;
      while (j < h && used < budget) {
        const size_t x = base + j, y = base + j + h;
        const uint32_t u = a[x], v = a[y];
        if (dir_ == Dir::forward) {
          a[x] = f.add(u, v);
          a[y] = f.mul(f.sub(u, v), w);
        } else {
          const uint32_t vw = f.mul(v, w);
          a[x] = f.add(u, vw);
          a[y] = f.sub(u, vw);
        }
        w = f.mul(w, wlen);
        ++j;
        ++t_;
        ++used;
      }
      if (j == h) {
        ++block;
        j = 0;
        w = f.one();
      }
    }
    if (t_ == half_total) {
      t_ = 0;
      if (++stage_ == log_n_) done_ = true;
    }
  }
  return used;
}

namespace {

uint64_t mul_mod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t inv_mod_u64(uint64_t a, uint64_t m) {  // m prime
  uint64_t r = 1, e = m - 2;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod_u64(r, a, m);
    a = mul_mod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

ResumableCorrelation::ResumableCorrelation(CorrelationSpec spec, unsigned __int128 coeff_bound,
                                           std::vector<int64_t>* acc)
    : spec_(std::move(spec)), acc_(acc) {
  if (spec_.b_len == 0) throw std::invalid_argument("correlation kernel must be non-empty");
  if (spec_.b_len > spec_.a_len)
    throw std::invalid_argument("correlation kernel longer than the sequence");
  if (coeff_bound > kMaxCoefficient)
    throw std::overflow_error("correlation coefficient bound exceeds the supported range");
  out_len_ = spec_.a_len - spec_.b_len + 1;
  if (acc_->size() != out_len_) throw std::invalid_argument("accumulator length mismatch");
  size_ = std::bit_ceil(spec_.a_len + spec_.b_len - 1);

  unsigned __int128 product = 1;
  for (const NttTables* t : ntt_primes()) {
    primes_.push_back(t);
    if (static_cast<size_t>(t->two_adicity) < static_cast<size_t>(std::countr_zero(size_)))
      throw std::overflow_error("transform size exceeds the supported limit");
    product *= t->prime;
    if (product > coeff_bound) break;
  }
  // ntt_primes() product is ~2^86 > kMaxCoefficient, so primes_ always covers the bound.

  n_inv_rep_.resize(primes_.size());
  residues_.resize(primes_.size());
  for (size_t p = 0; p < primes_.size(); ++p) {
    const MontgomeryField& f = primes_[p]->field;
    n_inv_rep_[p] = f.pow(f.to_rep(size_), primes_[p]->prime - 2);
  }

  const uint64_t bf = (size_ >> 1) * static_cast<uint64_t>(std::countr_zero(size_));
  planned_ = primes_.size() * (3 * size_ + 3 * bf + out_len_) + out_len_;

  fa_.resize(size_);
  fb_.resize(size_);
  enter_prime(0);
}

void ResumableCorrelation::enter_prime(size_t p) {
  prime_idx_ = p;
  phase_ = Phase::fill_a;
  cursor_ = 0;
}

uint64_t ResumableCorrelation::advance(uint64_t budget) {
  uint64_t used = 0;
  while (used < budget && phase_ != Phase::done) {
    switch (phase_) {
      case Phase::fill_a: {
        const MontgomeryField& f = primes_[prime_idx_]->field;
        while (cursor_ < size_ && used < budget) {
          fa_[cursor_] = cursor_ < spec_.a_len ? f.to_rep(spec_.a_at(cursor_)) : 0;
          ++cursor_;
          ++used;
        }
        if (cursor_ == size_) {
          ntt_.reset(&fa_, primes_[prime_idx_], ResumableNtt::Dir::forward);
          phase_ = Phase::fwd_a;
        }
        break;
      }
      case Phase::fwd_a: {
        used += ntt_.advance(budget - used);
        if (ntt_.finished()) {
          phase_ = Phase::fill_b;
          cursor_ = 0;
        }
        break;
      }
      case Phase::fill_b: {
        const MontgomeryField& f = primes_[prime_idx_]->field;
        while (cursor_ < size_ && used < budget) {
          // kernel enters reversed so the product becomes a correlation
          fb_[cursor_] =
              cursor_ < spec_.b_len ? f.to_rep(spec_.b_at(spec_.b_len - 1 - cursor_)) : 0;
          ++cursor_;
          ++used;
        }
        if (cursor_ == size_) {
          ntt_.reset(&fb_, primes_[prime_idx_], ResumableNtt::Dir::forward);
          phase_ = Phase::fwd_b;
        }
        break;
      }
      case Phase::fwd_b: {
        used += ntt_.advance(budget - used);
        if (ntt_.finished()) {
          phase_ = Phase::pointwise;
          cursor_ = 0;
        }
        break;
      }
      case Phase::pointwise: {
        const MontgomeryField& f = primes_[prime_idx_]->field;
        while (cursor_ < size_ && used < budget) {
          fa_[cursor_] = f.mul(fa_[cursor_], fb_[cursor_]);
          ++cursor_;
          ++used;
        }
        if (cursor_ == size_) {
          ntt_.reset(&fa_, primes_[prime_idx_], ResumableNtt::Dir::inverse);
          phase_ = Phase::inv;
        }
        break;
      }
      case Phase::inv: {
        used += ntt_.advance(budget - used);
        if (ntt_.finished()) {
          phase_ = Phase::extract;
          cursor_ = 0;
          residues_[prime_idx_].resize(out_len_);
        }
        break;
      }
      case Phase::extract: {
        const MontgomeryField& f = primes_[prime_idx_]->field;
        const size_t offset = spec_.b_len - 1;
        while (cursor_ < out_len_ && used < budget) {
          residues_[prime_idx_][cursor_] =
              f.from_rep(f.mul(fa_[offset + cursor_], n_inv_rep_[prime_idx_]));
          ++cursor_;
          ++used;
        }
        if (cursor_ == out_len_) {
          if (prime_idx_ + 1 < primes_.size()) {
            enter_prime(prime_idx_ + 1);
          } else {
            phase_ = Phase::combine;
            cursor_ = 0;
          }
        }
        break;
      }
      case Phase::combine: {
        const uint64_t p0 = primes_[0]->prime;
        const uint64_t p1 = primes_.size() > 1 ? primes_[1]->prime : 0;
        const uint64_t p2 = primes_.size() > 2 ? primes_[2]->prime : 0;
        const uint64_t inv01 = p1 ? inv_mod_u64(p0, p1) : 0;
        const uint64_t inv012 = p2 ? inv_mod_u64(mul_mod_u64(p0 % p2, p1 % p2, p2), p2) : 0;
        while (cursor_ < out_len_ && used < budget) {
          unsigned __int128 v = residues_[0][cursor_];
          if (p1) {
            const uint64_t r1 = residues_[1][cursor_];
            const uint64_t t1 =
                mul_mod_u64((r1 + p1 - static_cast<uint64_t>(v % p1)) % p1, inv01, p1);
            v += static_cast<unsigned __int128>(t1) * p0;
            if (p2) {
              const uint64_t r2 = residues_[2][cursor_];
              const uint64_t t2 =
                  mul_mod_u64((r2 + p2 - static_cast<uint64_t>(v % p2)) % p2, inv012, p2);
              v += static_cast<unsigned __int128>(t2) * p0 * p1;
            }
          }
          (*acc_)[cursor_] += spec_.coef * static_cast<int64_t>(v);
          ++cursor_;
          ++used;
        }
        if (cursor_ == out_len_) phase_ = Phase::done;
        break;
      }
      case Phase::done:
        break;
    }
  }
  return used;
}

std::vector<int64_t> cross_correlate(std::span<const uint64_t> a, std::span<const uint64_t> b) {
  if (b.empty()) throw std::invalid_argument("correlation kernel must be non-empty");
  if (b.size() > a.size())
    throw std::invalid_argument("correlation kernel longer than the sequence");
  uint64_t max_a = 0, max_b = 0;
  for (uint64_t v : a) max_a = std::max(max_a, v);
  for (uint64_t v : b) max_b = std::max(max_b, v);
  const unsigned __int128 bound = static_cast<unsigned __int128>(max_a) * max_b *
                                  std::min<uint64_t>(a.size(), b.size());

  std::vector<int64_t> acc(a.size() - b.size() + 1, 0);
  CorrelationSpec spec;
  spec.a_len = a.size();
  spec.b_len = b.size();
  spec.a_at = [a](size_t i) { return a[i]; };
  spec.b_at = [b](size_t j) { return b[j]; };
  spec.coef = 1;
  ResumableCorrelation corr(std::move(spec), bound, &acc);
  while (!corr.finished()) corr.advance(UINT64_MAX);
  return acc;
}

}  // namespace dynstr
