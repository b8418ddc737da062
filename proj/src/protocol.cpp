#include "qwork/protocol.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace qwork {

namespace {

constexpr double kJunctionTol = 1e-9;

double raw_sigmoid(double tau, double duration, double switching_time) {
  return 0.5 * (1.0 + std::tanh((tau - 0.5 * duration) / switching_time));
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

double segment_duration(const Segment& s) {
  return std::visit([](const auto& seg) { return seg.duration; }, s);
}

double segment_start(const Segment& s) {
  if (const auto* c = std::get_if<ConstantSegment>(&s)) return c->value;
  return std::get<TanhSegment>(s).start;
}

double segment_end(const Segment& s) {
  if (const auto* c = std::get_if<ConstantSegment>(&s)) return c->value;
  return std::get<TanhSegment>(s).end;
}

double segment_value(const Segment& s, double tau) {
  if (const auto* c = std::get_if<ConstantSegment>(&s)) return c->value;
  const auto& t = std::get<TanhSegment>(s);
  if (tau <= 0.0) return t.start;
  if (tau >= t.duration) return t.end;
  const double a = raw_sigmoid(0.0, t.duration, t.switching_time);
  const double b = raw_sigmoid(t.duration, t.duration, t.switching_time);
  const double x = (raw_sigmoid(tau, t.duration, t.switching_time) - a) / (b - a);
  return t.start + (t.end - t.start) * x;
}

QuenchSchedule::QuenchSchedule(std::vector<Segment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw ScheduleSemanticError("schedule has no segments", 0);
  double lo = segment_start(segments_.front());
  double hi = lo;
  for (const auto& s : segments_) {
    lo = std::min({lo, segment_start(s), segment_end(s)});
    hi = std::max({hi, segment_start(s), segment_end(s)});
  }
  const double range = std::max(hi - lo, 1.0);
  offsets_.reserve(segments_.size());
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const int idx = static_cast<int>(i) + 1;
    const Segment& s = segments_[i];
    const double d = segment_duration(s);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw ScheduleSemanticError("segment " + std::to_string(idx) + ": duration must be positive",
                                  idx);
    }
    if (const auto* t = std::get_if<TanhSegment>(&s)) {
      if (!(t->switching_time > 0.0)) {
        throw ScheduleSemanticError(
            "segment " + std::to_string(idx) + ": switching time must be positive", idx);
      }
    }
    if (i > 0) {
      const double prev = segment_end(segments_[i - 1]);
      if (std::abs(prev - segment_start(s)) > kJunctionTol * range) {
        std::ostringstream os;
        os << "segment " << idx << ": starts at " << segment_start(s)
           << " but previous segment ends at " << prev;
        throw ScheduleSemanticError(os.str(), idx);
      }
    }
    offsets_.push_back(total_);
    total_ += d;
  }
}

QuenchSchedule QuenchSchedule::constant(double value, double duration) {
  return QuenchSchedule({ConstantSegment{value, duration}});
}

QuenchSchedule QuenchSchedule::tanh_switch(double start, double end, double switching_time,
                                           double duration) {
  if (duration <= 0.0) duration = 8.0 * switching_time;
  return QuenchSchedule({TanhSegment{start, end, switching_time, duration}});
}

double QuenchSchedule::eval(double t) const {
  if (!(t >= 0.0) || t > total_ * (1.0 + 1e-14)) {
    std::ostringstream os;
    os << "eval_schedule: t = " << t << " outside [0, " << total_ << "]";
    throw DomainError(os.str());
  }
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), t);
  std::size_t i = static_cast<std::size_t>(std::distance(offsets_.begin(), it)) - 1;
  return segment_value(segments_[i], t - offsets_[i]);
}

QuenchSchedule QuenchSchedule::reversed() const {
  std::vector<Segment> out;
  out.reserve(segments_.size());
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
    if (const auto* c = std::get_if<ConstantSegment>(&*it)) {
      out.emplace_back(*c);
    } else {
      const auto& t = std::get<TanhSegment>(*it);
      out.emplace_back(TanhSegment{t.end, t.start, t.switching_time, t.duration});
    }
  }
  return QuenchSchedule(std::move(out));
}

QuenchSchedule QuenchSchedule::scaled(double scale) const {
  std::vector<Segment> out;
  out.reserve(segments_.size());
  for (const auto& s : segments_) {
    if (const auto* c = std::get_if<ConstantSegment>(&s)) {
      out.emplace_back(ConstantSegment{scale * c->value, c->duration});
    } else {
      auto t = std::get<TanhSegment>(s);
      t.start *= scale;
      t.end *= scale;
      out.emplace_back(t);
    }
  }
  return QuenchSchedule(std::move(out));
}

std::string QuenchSchedule::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (i) out += "; ";
    if (const auto* c = std::get_if<ConstantSegment>(&segments_[i])) {
      out += "const " + format_number(c->value) + " dur=" + format_number(c->duration);
    } else {
      const auto& t = std::get<TanhSegment>(segments_[i]);
      out += "tanh " + format_number(t.start) + " " + format_number(t.end) +
             " T=" + format_number(t.switching_time) + " dur=" + format_number(t.duration);
    }
  }
  return out;
}

namespace {

class ScheduleParser {
 public:
  explicit ScheduleParser(std::string_view text) : text_(text) {}

  QuenchSchedule parse() {
    std::vector<Segment> segs;
    skip_ws();
    if (at_end()) fail("empty schedule");
    while (true) {
      segs.push_back(parse_clause());
      skip_ws();
      if (at_end()) break;
      if (peek() != ';') fail("expected ';' between segments");
      advance();
      skip_ws();
      if (at_end()) break;  // trailing ';'
    }
    return QuenchSchedule(std::move(segs));
  }

 private:
  Segment parse_clause() {
    skip_ws();
    const int line = line_, col = col_;
    const std::string kw = word();
    if (kw == "const") {
      ConstantSegment c;
      c.value = number();
      c.duration = keyed("dur");
      return c;
    }
    if (kw == "tanh") {
      TanhSegment t;
      t.start = number();
      t.end = number();
      t.switching_time = keyed("T");
      skip_ws();
      if (!at_end() && peek() == 'd') {
        t.duration = keyed("dur");
      } else {
        t.duration = 8.0 * t.switching_time;
      }
      return t;
    }
    if (kw.empty()) fail("expected segment keyword 'const' or 'tanh'", line, col);
    fail("unknown segment keyword '" + kw + "'", line, col);
  }

  double keyed(const char* key) {
    skip_ws();
    const int line = line_, col = col_;
    const std::string k = word();
    if (k != key) fail(std::string("expected '") + key + "='", line, col);
    skip_ws();
    if (at_end() || peek() != '=') fail(std::string("expected '=' after '") + key + "'");
    advance();
    return number();
  }

  std::string word() {
    skip_ws();
    std::string w;
    while (!at_end() && (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) {
      w.push_back(peek());
      advance();
    }
    return w;
  }

  double number() {
    skip_ws();
    const int line = line_, col = col_;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    if (first != last && *first == '+') ++first;
    double v = 0.0;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc()) fail("expected a number", line, col);
    const auto consumed = static_cast<std::size_t>(res.ptr - (text_.data() + pos_));
    for (std::size_t i = 0; i < consumed; ++i) advance();
    return v;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) { fail(msg, line_, col_); }
  [[noreturn]] void fail(const std::string& msg, int line, int col) {
    std::ostringstream os;
    os << "schedule syntax error at " << line << ":" << col << ": " << msg;
    throw ScheduleSyntaxError(os.str(), line, col);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

QuenchSchedule parse_schedule(std::string_view text) { return ScheduleParser(text).parse(); }

QuenchSchedule repeated_tanh(double lo, double hi, double t_slow, double t_fast,
                             std::string_view pattern) {
  if (pattern.empty() || pattern.size() % 2 == 0) {
    throw DomainError("repeated_tanh: pattern length must be odd so the schedule ends at hi");
  }
  std::vector<Segment> segs;
  bool up = true;
  for (char c : pattern) {
    double t = 0.0;
    if (c == 'S' || c == 's') {
      t = t_slow;
    } else if (c == 'F' || c == 'f') {
      t = t_fast;
    } else {
      throw DomainError(std::string("repeated_tanh: unknown pattern character '") + c + "'");
    }
    segs.emplace_back(up ? TanhSegment{lo, hi, t, 8.0 * t} : TanhSegment{hi, lo, t, 8.0 * t});
    up = !up;
  }
  return QuenchSchedule(std::move(segs));
}

}  // namespace qwork
