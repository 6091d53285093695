#include "evgap/split.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "evgap/rng.hpp"

namespace evgap {

TemporalSplitResult temporal_split(std::span<const Sample> recording_samples) {
  if (recording_samples.empty()) {
    throw ValidationError("cannot split an empty recording");
  }
  const std::string& rec = recording_samples.front().recording_id;
  for (std::size_t i = 0; i < recording_samples.size(); ++i) {
    if (recording_samples[i].recording_id != rec) {
      throw ValidationError("temporal split expects a single recording, got " +
                            rec + " and " + recording_samples[i].recording_id);
    }
    if (i > 0 && recording_samples[i].t < recording_samples[i - 1].t) {
      throw ValidationError("recording " + rec + " is not sorted by time");
    }
  }
  // integer floor of 0.85 n without touching floating point
  const std::size_t cut = recording_samples.size() * 85 / 100;
  TemporalSplitResult result;
  result.train.reserve(cut);
  result.test.reserve(recording_samples.size() - cut);
  for (std::size_t i = 0; i < recording_samples.size(); ++i) {
    Sample s = recording_samples[i];
    s.split = i < cut ? SplitTag::Train : SplitTag::Test;
    (i < cut ? result.train : result.test).push_back(std::move(s));
  }
  return result;
}

std::vector<Sample> build_biased_set(std::span<const Sample> target,
                                     std::span<const Sample> opposite,
                                     double ratio, std::uint64_t seed) {
  if (ratio < 0.0 || ratio > 1.0) {
    throw ValidationError("opposite ratio must be in [0, 1]");
  }
  const std::size_t quota =
      std::min(opposite.size(),
               static_cast<std::size_t>(ratio * target.size()));

  // key each opposite sample by id so the draw ignores input order
  std::vector<std::pair<std::pair<std::uint64_t, std::string>, std::size_t>>
      keyed;
  keyed.reserve(opposite.size());
  for (std::size_t i = 0; i < opposite.size(); ++i) {
    DerivedRng rng(seed, RngPurpose::Select, opposite[i].sample_id);
    keyed.push_back({{rng.next_u64(), opposite[i].sample_id}, i});
  }
  std::sort(keyed.begin(), keyed.end());

  std::vector<Sample> out(target.begin(), target.end());
  out.reserve(target.size() + quota);
  for (std::size_t k = 0; k < quota; ++k) {
    out.push_back(opposite[keyed[k].second]);
  }
  return out;
}

std::vector<Sample> build_pure_set(std::span<const Sample> target) {
  std::vector<Sample> out(target.begin(), target.end());
  if (out.empty()) return out;
  if (!out.front().lighting) {
    throw ValidationError("sample " + out.front().sample_id +
                          " has no lighting tag");
  }
  const Lighting want = *out.front().lighting;
  for (const Sample& s : out) {
    if (!s.lighting || *s.lighting != want) {
      throw ValidationError("pure set mixes lighting conditions at sample " +
                            s.sample_id);
    }
  }
  return out;
}

void validate_split_outputs(std::span<const Sample> train,
                            std::span<const Sample> test, BiasSet bias,
                            double ratio) {
  std::set<std::string> test_ids;
  for (const Sample& s : test) test_ids.insert(s.sample_id);
  for (const Sample& s : train) {
    if (test_ids.count(s.sample_id)) {
      throw ValidationError("sample " + s.sample_id +
                            " appears in both train and test");
    }
  }

  // chronology: every train timestamp strictly precedes every test timestamp
  // within the same recording
  std::map<std::string, std::uint64_t> max_train_t;
  for (const Sample& s : train) {
    auto [it, inserted] = max_train_t.insert({s.recording_id, s.t});
    if (!inserted) it->second = std::max(it->second, s.t);
  }
  for (const Sample& s : test) {
    auto it = max_train_t.find(s.recording_id);
    if (it != max_train_t.end() && s.t <= it->second) {
      throw ValidationError("recording " + s.recording_id +
                            " has test sample " + s.sample_id +
                            " at or before a train sample");
    }
  }

  if (!test.empty()) {
    const Lighting want = bias_target(bias);
    for (const Sample& s : test) {
      if (!s.lighting || *s.lighting != want) {
        throw ValidationError("test set must be pure " +
                              std::string(to_string(want)) +
                              ", offending sample " + s.sample_id);
      }
    }
  }

  const Lighting target_lighting = bias_target(bias);
  std::size_t n_target = 0;
  std::size_t n_opposite = 0;
  for (const Sample& s : train) {
    if (!s.lighting) {
      throw ValidationError("sample " + s.sample_id + " has no lighting tag");
    }
    (*s.lighting == target_lighting ? n_target : n_opposite) += 1;
  }
  const bool pure = bias == BiasSet::PureDay || bias == BiasSet::PureNight;
  if (pure && n_opposite != 0) {
    throw ValidationError("pure training set contains opposite lighting");
  }
  if (!pure) {
    const auto bound = static_cast<std::size_t>(ratio * n_target);
    if (n_opposite > bound) {
      throw ValidationError("opposite-lighting count " +
                            std::to_string(n_opposite) + " exceeds bound " +
                            std::to_string(bound));
    }
  }
}

}  // namespace evgap
