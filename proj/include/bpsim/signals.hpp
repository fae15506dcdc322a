#ifndef BPSIM_SIGNALS_HPP_
#define BPSIM_SIGNALS_HPP_

#include <cstddef>
#include <vector>

namespace bpsim {

/// delta(t) = offset + amplitude * sin(frequency * t + phase).
struct HarmonicDisturbance {
  double amplitude = 0.0;  // plant-input units, >= 0
  double frequency = 1.0;  // rad/s
  double phase = 0.0;      // rad
  double offset = 0.0;     // constant bias, 0 in the nominal model

  double eval(double t) const;
};

/// Fixed-capacity ring of (time, value) samples with strictly increasing
/// timestamps. Reads between samples use linear interpolation.
class DelayBuffer {
 public:
  explicit DelayBuffer(std::size_t capacity);

  // Capacity covering history depth 2*tau_max at sampling interval step,
  // plus a 10-step safety margin.
  static std::size_t capacity_for(double tau_max, double step);

  void push(double t, double v);  // throws on non-monotone t
  // Value at t_query; exact on stored timestamps, linearly interpolated
  // otherwise. Throws std::out_of_range ("insufficient history") before the
  // oldest sample and for queries past the newest.
  double sample(double t_query) const;
  bool covers(double t_query) const;

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return ring_.size(); }

 private:
  struct Entry {
    double t, v;
  };
  const Entry& at(std::size_t i) const;  // i = 0 is oldest

  std::vector<Entry> ring_;
  std::size_t head_ = 0;  // next write position
  std::size_t size_ = 0;
};

}  // namespace bpsim

#endif  // BPSIM_SIGNALS_HPP_
