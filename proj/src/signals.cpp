#include "bpsim/signals.hpp"

#include <cmath>
#include <stdexcept>

namespace bpsim {

double HarmonicDisturbance::eval(double t) const {
  return offset + amplitude * std::sin(frequency * t + phase);
}

DelayBuffer::DelayBuffer(std::size_t capacity) : ring_(capacity) {
  if (capacity < 2) throw std::invalid_argument("DelayBuffer: capacity must be >= 2");
}

std::size_t DelayBuffer::capacity_for(double tau_max, double step) {
  return static_cast<std::size_t>(std::ceil(2.0 * tau_max / step)) + 12;
}

const DelayBuffer::Entry& DelayBuffer::at(std::size_t i) const {
  return ring_[(head_ + ring_.size() - size_ + i) % ring_.size()];
}

void DelayBuffer::push(double t, double v) {
  if (size_ > 0 && t <= at(size_ - 1).t)
    throw std::invalid_argument("DelayBuffer::push: timestamps must be strictly increasing");
  ring_[head_] = {t, v};
  head_ = (head_ + 1) % ring_.size();
  if (size_ < ring_.size()) ++size_;
}

bool DelayBuffer::covers(double t_query) const {
  return size_ > 0 && t_query >= at(0).t && t_query <= at(size_ - 1).t;
}

double DelayBuffer::sample(double t_query) const {
  if (!covers(t_query))
    throw std::out_of_range("DelayBuffer::sample: insufficient history");
  // Binary search for the first entry with t >= t_query.
  std::size_t lo = 0, hi = size_ - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (at(mid).t < t_query)
      lo = mid + 1;
    else
      hi = mid;
  }
  const Entry& upper = at(lo);
  if (upper.t == t_query || lo == 0) return upper.v;
  const Entry& lower = at(lo - 1);
  // Queries formed by t - m*step arithmetic land a few ulps off the stored
  // timestamp; snap so integer-multiple delays stay bit-exact.
  const double gap = upper.t - lower.t;
  if (upper.t - t_query <= 1e-9 * gap) return upper.v;
  if (t_query - lower.t <= 1e-9 * gap) return lower.v;
  const double lambda = (t_query - lower.t) / gap;
  return lower.v + lambda * (upper.v - lower.v);
}

}  // namespace bpsim
