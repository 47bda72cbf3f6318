#include "dublaser/types.hpp"

#include <algorithm>

namespace dublaser {

std::optional<SegKind> segment_from_letter(char c) {
  switch (c) {
    case 'L': return SegKind::LeftArc;
    case 'R': return SegKind::RightArc;
    case 'S': return SegKind::Straight;
    default: return std::nullopt;
  }
}

std::optional<LaserSense> sense_from_symbol(char c) {
  switch (c) {
    case '+': return LaserSense::Clockwise;
    case '-': return LaserSense::CounterClockwise;
    default: return std::nullopt;
  }
}

bool CandidateType::valid() const {
  static const char* admissible[] = {
      "RS|+", "RS|-", "LS|+", "LS|-", "S|+",   "S|-",   "R|+",   "L|-",
      "RSR|+", "RSL|-", "LSL|-", "LSR|+", "RL|-", "LR|+", "SR|+", "SL|-"};
  const std::string l = label();
  return std::any_of(std::begin(admissible), std::end(admissible),
                     [&](const char* a) { return l == a; });
}

std::optional<CandidateType> CandidateType::parse(const std::string& label) {
  const auto bar = label.find('|');
  if (bar == std::string::npos || bar + 2 != label.size()) return std::nullopt;
  const auto sense = sense_from_symbol(label[bar + 1]);
  if (!sense) return std::nullopt;
  CandidateType c{label.substr(0, bar), *sense};
  if (!c.valid()) return std::nullopt;
  return c;
}

std::string TrajectoryPlan::realized_word() const {
  std::string w;
  for (const PoseSegment& s : segments) w.push_back(segment_letter(s.kind));
  return w;
}

double total_duration(const TrajectoryPlan& plan) {
  double t = 0.0;
  for (const PoseSegment& s : plan.segments) t += s.duration;
  return t;
}

}  // namespace dublaser
