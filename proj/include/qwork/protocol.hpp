// protocol.hpp - declarative quench schedules lambda(t).

#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qwork/error.hpp"

namespace qwork {

struct ConstantSegment {
  double value = 0.0;
  double duration = 0.0;
  bool operator==(const ConstantSegment&) const = default;
};

/// Smooth switch start -> end centered at duration/2 with switching time T.
/// The tanh profile is affinely rescaled so both endpoints are hit exactly.
struct TanhSegment {
  double start = 0.0;
  double end = 0.0;
  double switching_time = 1.0;
  double duration = 8.0;
  bool operator==(const TanhSegment&) const = default;
};

using Segment = std::variant<ConstantSegment, TanhSegment>;

double segment_duration(const Segment& s);
double segment_start(const Segment& s);
double segment_end(const Segment& s);
/// Value at local time tau in [0, duration].
double segment_value(const Segment& s, double tau);

struct ScheduleSyntaxError : Error {
  ScheduleSyntaxError(const std::string& what, int line, int column)
      : Error(ErrorKind::Parse, what), line(line), column(column) {}
  int line;
  int column;
};

struct ScheduleSemanticError : Error {
  ScheduleSemanticError(const std::string& what, int segment)
      : Error(ErrorKind::Parse, what), segment(segment) {}
  int segment;  // 1-based
};

class QuenchSchedule {
 public:
  /// Validates positivity of durations/switching times and continuity at junctions.
  explicit QuenchSchedule(std::vector<Segment> segments);

  static QuenchSchedule constant(double value, double duration);
  /// Single tanh switch; duration defaults to 8T.
  static QuenchSchedule tanh_switch(double start, double end, double switching_time,
                                    double duration = 0.0);

  const std::vector<Segment>& segments() const { return segments_; }
  double quench_time() const { return total_; }
  double lambda_i() const { return segment_start(segments_.front()); }
  double lambda_f() const { return segment_end(segments_.back()); }
  /// Start time of segment i.
  double segment_offset(std::size_t i) const { return offsets_.at(i); }

  /// Throws DomainError for t outside [0, t_Q].
  double eval(double t) const;

  /// r.eval(t) == eval(t_Q - t).
  QuenchSchedule reversed() const;

  /// Every segment value mapped through v -> scale * v.
  QuenchSchedule scaled(double scale) const;

  /// Canonical text form; parse(to_string()) reproduces the segment list exactly.
  std::string to_string() const;

  bool operator==(const QuenchSchedule& o) const { return segments_ == o.segments_; }

 private:
  std::vector<Segment> segments_;
  std::vector<double> offsets_;
  double total_ = 0.0;
};

/// Grammar: clauses separated by ';'
///   const <value> dur=<time>
///   tanh <start> <end> T=<time> [dur=<time>]
QuenchSchedule parse_schedule(std::string_view text);

inline QuenchSchedule reverse_schedule(const QuenchSchedule& s) { return s.reversed(); }

/// Alternating up/down tanh switches between lo and hi, starting with an
/// up-switch. Each character of `pattern` picks the speed of one switch:
/// 'S' uses t_slow, 'F' uses t_fast. The pattern length must be odd so the
/// schedule ends at hi.
QuenchSchedule repeated_tanh(double lo, double hi, double t_slow, double t_fast,
                             std::string_view pattern);

}  // namespace qwork
