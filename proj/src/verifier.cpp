/* Copyright 2026 The imverify Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "imverify/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <unordered_map>

#include "imverify/detail/parallel.hpp"

namespace imverify {

namespace {

// Applies spec, reusing the image after the longest shared prefix of
// composite parameters. Values arrive in sorted order, so neighbours share
// prefixes.
class Applier {
 public:
  Applier(const TransformSpec& spec, const Image& img) : spec_(spec), img_(img) {}

  Image operator()(const ParamValue& c) {
    if (spec_.kind != TransformKind::kComposite) return apply(spec_, img_, c);
    const auto& t = c.tuple();
    if (t.size() != spec_.parts.size()) {
      throw DomainError("composite parameter arity mismatch");
    }
    std::size_t reuse = 0;
    while (reuse < stages_.size() && reuse + 1 < t.size() &&
           stages_[reuse].first == t[reuse]) {
      ++reuse;
    }
    stages_.resize(reuse);
    for (std::size_t k = reuse; k + 1 < t.size(); ++k) {
      const Image& in = k == 0 ? img_ : stages_.back().second;
      stages_.emplace_back(t[k], apply(spec_.parts[k], in, t[k]));
    }
    const Image& in = t.size() == 1 ? img_ : stages_.back().second;
    return apply(spec_.parts.back(), in, t.back());
  }

 private:
  const TransformSpec& spec_;
  const Image& img_;
  std::vector<std::pair<ParamValue, Image>> stages_;
};

}  // namespace

void validate_property(const SafetyProperty& prop) {
  if (const auto* k = std::get_if<KSafe>(&prop.checker)) {
    if (k->k < 1) throw DomainError("k must be at least 1");
  } else {
    const double t = std::get<TSafe>(prop.checker).t;
    if (!(t >= 0) || !std::isfinite(t)) throw DomainError("t must be a nonnegative number");
  }
  validate_space(prop.transform, prop.space);
}

bool holds(const Checker& checker, std::size_t selector, const Prediction& original,
           const Prediction& transformed) {
  if (const auto* k = std::get_if<KSafe>(&checker)) {
    return check_k_safe(original, transformed, k->k);
  }
  return check_t_safe(original, transformed, std::get<TSafe>(checker).t, selector);
}

void stream_outputs(const Image& img, const TransformSpec& spec,
                    const std::vector<ParamValue>& values, const StreamOptions& opts,
                    const std::function<void(std::vector<EnumeratedOutput>&&)>& on_new,
                    const std::function<void(const Digest&, const ParamValue&)>& on_repeat) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  if (!std::is_sorted(values.begin(), values.end())) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  }
  const std::size_t chunk = std::max<std::size_t>(opts.chunk, 1);
  const int workers = detail::resolve_workers(opts.workers);
  std::unordered_map<Digest, bool, DigestHash> seen;
  std::vector<std::optional<Image>> images;
  std::vector<Digest> digests;
  for (std::size_t begin = 0; begin < order.size(); begin += chunk) {
    const std::size_t n = std::min(chunk, order.size() - begin);
    images.assign(n, std::nullopt);
    digests.assign(n, Digest{});
    detail::parallel_for(n, workers, [&](std::size_t b, std::size_t e, int) {
      Applier applier(spec, img);
      for (std::size_t k = b; k < e; ++k) {
        images[k] = applier(values[order[begin + k]]);
        digests[k] = image_digest(*images[k]);
      }
    });
    std::vector<EnumeratedOutput> fresh;
    std::vector<std::size_t> repeats;
    for (std::size_t k = 0; k < n; ++k) {
      const ParamValue& p = values[order[begin + k]];
      const bool repeat = !seen.emplace(digests[k], true).second;
      if (repeat && opts.dedup) {
        repeats.push_back(k);
        continue;
      }
      fresh.push_back({p, {p}, std::move(*images[k]), digests[k]});
    }
    // Repeats may refer to outputs first seen in this round.
    if (!fresh.empty()) on_new(std::move(fresh));
    for (std::size_t k : repeats) on_repeat(digests[k], values[order[begin + k]]);
  }
}

std::vector<EnumeratedOutput> enumerate_outputs(const Image& img, const TransformSpec& spec,
                                                const CriticalParamSet& cset, int workers) {
  if (cset.dims != img.dims()) {
    throw DomainError("critical set was computed for different dimensions");
  }
  std::vector<EnumeratedOutput> out;
  std::unordered_map<Digest, std::size_t, DigestHash> where;
  StreamOptions opts;
  opts.workers = workers;
  stream_outputs(
      img, spec, cset.values, opts,
      [&](std::vector<EnumeratedOutput>&& fresh) {
        for (auto& o : fresh) {
          where.emplace(o.digest, out.size());
          out.push_back(std::move(o));
        }
      },
      [&](const Digest& d, const ParamValue& p) { out[where.at(d)].params.push_back(p); });
  return out;
}

std::size_t Verdict::raw_violation_count() const {
  std::size_t n = 0;
  for (const auto& v : violations) n += v.params.size();
  return n;
}

Verdict verify_local(ModelHandle& model, const Image& img, const std::string& input_id,
                     const SafetyProperty& prop, const VerifyOptions& opts) {
  validate_property(prop);
  const auto cset = critical_params(prop.transform, prop.space, img.dims(), opts.workers);
  return verify_local(model, img, input_id, prop, cset, opts);
}

Verdict verify_local(ModelHandle& model, const Image& img, const std::string& input_id,
                     const SafetyProperty& prop, const CriticalParamSet& cset,
                     const VerifyOptions& opts) {
  if (cset.dims != img.dims()) {
    throw DomainError("critical set was computed for different dimensions");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::size_t batch = opts.batch_size ? opts.batch_size
                                            : static_cast<std::size_t>(model.spec().batch_size);
  Verdict verdict;
  verdict.input_id = input_id;
  verdict.property = prop.name;
  verdict.stats.critical_values = cset.values.size();

  const Prediction original = model.predict(std::span<const Image>(&img, 1)).front();
  verdict.stats.model_calls = 1;

  // Violation index per violating digest; absent for safe images.
  std::unordered_map<Digest, std::size_t, DigestHash> violating;
  std::vector<EnumeratedOutput> pending;

  auto flush = [&] {
    if (pending.empty()) return;
    std::vector<Image> imgs;
    imgs.reserve(pending.size());
    for (auto& o : pending) imgs.push_back(std::move(o.image));
    const auto preds = model.predict(imgs, static_cast<int>(batch));
    verdict.stats.model_calls += imgs.size();
    for (std::size_t k = 0; k < pending.size(); ++k) {
      auto& o = pending[k];
      if (auto it = violating.find(o.digest); it != violating.end()) {
        verdict.violations[it->second].params.push_back(o.param);
        continue;
      }
      if (holds(prop.checker, prop.selector, original, preds[k])) continue;
      violating.emplace(o.digest, verdict.violations.size());
      verdict.violations.push_back(
          {input_id, o.param, std::move(o.params), o.digest, original, preds[k]});
    }
    pending.clear();
  };

  StreamOptions sopts;
  sopts.chunk = std::max<std::size_t>(batch, 64);
  sopts.workers = opts.workers;
  sopts.dedup = opts.dedup;
  stream_outputs(
      img, prop.transform, cset.values, sopts,
      [&](std::vector<EnumeratedOutput>&& fresh) {
        verdict.stats.outputs_enumerated += fresh.size();
        for (auto& o : fresh) {
          pending.push_back(std::move(o));
          if (pending.size() >= batch) flush();
        }
      },
      [&](const Digest& d, const ParamValue& p) {
        // A repeat of a pending image is resolved once its batch runs.
        for (auto& o : pending) {
          if (o.digest == d) {
            o.params.push_back(p);
            return;
          }
        }
        if (auto it = violating.find(d); it != violating.end()) {
          verdict.violations[it->second].params.push_back(p);
        }
      });
  flush();

  verdict.status = verdict.violations.empty() ? Status::kVerified : Status::kViolated;
  verdict.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return verdict;
}

}  // namespace imverify
