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
#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "imverify/critical.hpp"
#include "imverify/models.hpp"
#include "imverify/verifier.hpp"
#include "test_util.hpp"

namespace imverify {
namespace {

using testing::random_image;

ModelHandle Builtin(const std::string& name, int batch = 64) {
  ModelSpec spec;
  spec.transport = BuiltinTransport{name};
  spec.batch_size = batch;
  return ModelHandle(spec);
}

SafetyProperty Prop(TransformKind kind, ParamSpace space, Checker checker = KSafe{1}) {
  return {std::string(kind_name(kind)), TransformSpec::of(kind), std::move(space), checker};
}

std::set<Digest> ViolatingDigests(const Verdict& v) {
  std::set<Digest> out;
  for (const auto& x : v.violations) out.insert(x.digest);
  return out;
}

bool Subset(const std::set<Digest>& a, const std::set<Digest>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

TEST(EnumerateOutputs, SaturatedBrightnessCollapses) {
  const Image img = Image::filled(4, 4, 1, 250);
  const auto spec = TransformSpec::of(TransformKind::kBrightness);
  const auto cset = critical_params(spec, ParamSpace::scalar(0, 20, true), img.dims());
  const auto out = enumerate_outputs(img, spec, cset);
  ASSERT_EQ(out.size(), 6u);
  for (int b = 0; b < 6; ++b) EXPECT_EQ(out[b].param, ParamValue(static_cast<double>(b)));
  EXPECT_EQ(out[5].params.size(), 16u);
  EXPECT_EQ(out[5].params.back(), ParamValue(20.0));
  EXPECT_EQ(out[5].image, Image::filled(4, 4, 1, 255));
  EXPECT_EQ(out[5].digest, image_digest(out[5].image));
}

TEST(EnumerateOutputs, MirrorSymmetricImageUnderReflection) {
  Image img = Image::filled(4, 3, 1, 0);
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 2; ++i) {
      img.at(i, j) = img.at(3 - i, j) = static_cast<std::uint8_t>(10 * j + i);
    }
  }
  const auto spec = TransformSpec::of(TransformKind::kReflection);
  const auto out = enumerate_outputs(
      img, spec, critical_params(spec, default_space(TransformKind::kReflection), img.dims()));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].param, ParamValue(Reflection::kHorizontal));
  EXPECT_EQ(out[0].image, img);
  EXPECT_EQ(out[1].params,
            (std::vector<ParamValue>{Reflection::kVertical, Reflection::kCentral}));
}

TEST(EnumerateOutputs, SingletonSet) {
  const Image img = random_image(5, 5, 1, 1);
  const auto spec = TransformSpec::of(TransformKind::kAvgSmooth);
  const auto out =
      enumerate_outputs(img, spec, critical_params(spec, ParamSpace::scalar(3, 3, true), img.dims()));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].image, apply(spec, img, 3.0));
}

TEST(EnumerateOutputs, DistinctAndCoveringEveryValue) {
  const Image img = random_image(7, 6, 1, 2);
  const auto spec = TransformSpec::of(TransformKind::kRotation);
  const auto cset = critical_params(spec, ParamSpace::scalar(-20, 20), img.dims());
  const auto out = enumerate_outputs(img, spec, cset, 2);
  std::set<Digest> digests;
  std::size_t values = 0;
  for (const auto& o : out) {
    EXPECT_TRUE(digests.insert(o.digest).second);
    EXPECT_TRUE(std::is_sorted(o.params.begin(), o.params.end()));
    EXPECT_EQ(o.param, o.params.front());
    for (const auto& p : o.params) EXPECT_EQ(image_digest(apply(spec, img, p)), o.digest);
    values += o.params.size();
  }
  EXPECT_EQ(values, cset.size());
  EXPECT_TRUE(std::is_sorted(out.begin(), out.end(),
                             [](const auto& a, const auto& b) { return a.param < b.param; }));
}

TEST(EnumerateOutputs, WrongDimensionsThrow) {
  const auto spec = TransformSpec::of(TransformKind::kBrightness);
  const auto cset = critical_params(spec, ParamSpace::scalar(0, 3, true), {4, 4});
  EXPECT_THROW(enumerate_outputs(Image::filled(4, 5, 1, 0), spec, cset), DomainError);
}

TEST(StreamOutputs, ChunkingIsTransparent) {
  const Image img = random_image(6, 6, 1, 3);
  const auto spec = TransformSpec::of(TransformKind::kContrast);
  const auto values = critical_params(spec, ParamSpace::scalar(0.5, 0.6), img.dims()).values;
  auto run = [&](std::size_t chunk) {
    std::vector<std::pair<Digest, std::vector<ParamValue>>> out;
    std::map<Digest, std::size_t> where;
    StreamOptions opts;
    opts.chunk = chunk;
    stream_outputs(
        img, spec, values, opts,
        [&](std::vector<EnumeratedOutput>&& fresh) {
          for (auto& o : fresh) {
            where[o.digest] = out.size();
            out.emplace_back(o.digest, o.params);
          }
        },
        [&](const Digest& d, const ParamValue& p) { out[where.at(d)].second.push_back(p); });
    return out;
  };
  const auto ref = run(1);
  EXPECT_EQ(run(7), ref);
  EXPECT_EQ(run(10000), ref);
}

TEST(StreamOutputs, WithoutDedupEveryValueIsNew) {
  const Image img = Image::filled(3, 3, 1, 250);
  const auto spec = TransformSpec::of(TransformKind::kBrightness);
  std::vector<ParamValue> values;
  for (int b = 20; b >= 0; --b) values.emplace_back(static_cast<double>(b));
  StreamOptions opts;
  opts.dedup = false;
  std::vector<ParamValue> seen;
  stream_outputs(
      img, spec, values, opts,
      [&](std::vector<EnumeratedOutput>&& fresh) {
        for (auto& o : fresh) seen.push_back(o.param);
      },
      [&](const Digest&, const ParamValue&) { FAIL(); });
  ASSERT_EQ(seen.size(), 21u);
  EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
}

TEST(Holds, KSafe) {
  const auto orig = classification_from_ranking({"a", "b", "c"});
  const auto trans = classification_from_ranking({"b", "a", "c"});
  EXPECT_FALSE(holds(KSafe{1}, 0, orig, trans));
  EXPECT_TRUE(holds(KSafe{2}, 0, orig, trans));
  EXPECT_TRUE(holds(KSafe{1}, 0, orig, orig));
}

TEST(Holds, TSafe) {
  const Prediction a = make_regression(0.5);
  EXPECT_TRUE(holds(TSafe{0.1}, 0, a, make_regression(0.6)));
  EXPECT_FALSE(holds(TSafe{0.1}, 0, a, make_regression(0.61)));
  EXPECT_TRUE(holds(TSafe{0}, 0, a, a));
}

TEST(Holds, MismatchedTaskThrows) {
  EXPECT_THROW(holds(TSafe{0.1}, 0, classification_from_ranking({"a"}),
                     classification_from_ranking({"a"})),
               DomainError);
  EXPECT_THROW(holds(KSafe{1}, 0, make_regression(0), make_regression(0)), DomainError);
}

TEST(ValidateProperty, RejectsBadCheckers) {
  EXPECT_THROW(validate_property(Prop(TransformKind::kBrightness,
                                      default_space(TransformKind::kBrightness), KSafe{0})),
               DomainError);
  EXPECT_THROW(validate_property(Prop(TransformKind::kBrightness,
                                      default_space(TransformKind::kBrightness), TSafe{-1})),
               DomainError);
  EXPECT_THROW(validate_property(Prop(TransformKind::kRotation, ParamSpace::scalar(3, 1))),
               DomainError);
}

TEST(VerifyLocal, ConstantModelIsVerified) {
  auto model = Builtin("constant");
  const Image img = random_image(8, 8, 1, 4);
  const auto v = verify_local(model, img, "x", Prop(TransformKind::kRotation,
                                                    default_space(TransformKind::kRotation)));
  EXPECT_TRUE(v.verified());
  EXPECT_EQ(v.status, Status::kVerified);
  EXPECT_EQ(v.input_id, "x");
  EXPECT_EQ(v.property, "rotation");
  EXPECT_GT(v.stats.critical_values, 0u);
  EXPECT_EQ(v.stats.model_calls, v.stats.outputs_enumerated + 1);
  EXPECT_EQ(model.queries_used(), v.stats.model_calls);
}

// Mean-intensity on a uniform image reduces to the top label of one value.
int ScalarTop(int v) { return std::min(7, std::clamp(v, 0, 255) / 32); }

TEST(VerifyLocal, UniformBrightnessMatchesScalarBruteForce) {
  auto model = Builtin("mean-intensity", 16);
  for (int u : {8, 96, 232}) {
    const Image img = Image::filled(8, 8, 1, static_cast<std::uint8_t>(u));
    const auto v = verify_local(model, img, "u", Prop(TransformKind::kBrightness,
                                                      default_space(TransformKind::kBrightness)));
    std::size_t raw = 0;
    std::set<int> distinct;
    for (int b = -100; b <= 100; ++b) {
      if (ScalarTop(u + b) != ScalarTop(u)) {
        ++raw;
        distinct.insert(std::clamp(u + b, 0, 255));
      }
    }
    EXPECT_EQ(v.raw_violation_count(), raw) << u;
    EXPECT_EQ(v.violations.size(), distinct.size()) << u;
  }
}

TEST(VerifyLocal, UniformNinetySixFrozenCounts) {
  auto model = Builtin("mean-intensity");
  const auto v = verify_local(model, Image::filled(8, 8, 1, 96), "u",
                              Prop(TransformKind::kBrightness,
                                   default_space(TransformKind::kBrightness)));
  // Darker by 1..100 or brighter by 32..100; -100..-96 all give black.
  EXPECT_EQ(v.raw_violation_count(), 169u);
  EXPECT_EQ(v.violations.size(), 165u);
  EXPECT_EQ(v.violations.front().param, ParamValue(-100.0));
  EXPECT_EQ(v.violations.front().params.size(), 5u);
}

TEST(VerifyLocal, AllLabelsAllowedIsVerified) {
  auto model = Builtin("mean-intensity");
  const auto v = verify_local(model, Image::filled(8, 8, 1, 96), "u",
                              Prop(TransformKind::kBrightness,
                                   default_space(TransformKind::kBrightness), KSafe{8}));
  EXPECT_TRUE(v.verified());
}

TEST(VerifyLocal, MonotoneInK) {
  auto model = Builtin("mean-intensity");
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Image img = random_image(16, 16, 1, 50 + seed);
    std::set<Digest> prev;
    for (std::size_t k = 1; k <= 8; ++k) {
      const auto v = verify_local(model, img, "r", Prop(TransformKind::kContrast,
                                                        ParamSpace::scalar(0.2, 3), KSafe{k}));
      const auto cur = ViolatingDigests(v);
      if (k > 1) {
        EXPECT_TRUE(Subset(cur, prev)) << k;
      }
      prev = cur;
    }
    EXPECT_TRUE(prev.empty());
  }
}

TEST(VerifyLocal, MonotoneInT) {
  auto model = Builtin("centroid");
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Image img = random_image(16, 16, 1, 60 + seed);
    std::set<Digest> prev;
    bool first = true;
    for (double t : {0.05, 0.1, 0.2, 0.4}) {
      const auto v = verify_local(model, img, "r",
                                  Prop(TransformKind::kTranslation,
                                       default_space(TransformKind::kTranslation), TSafe{t}));
      const auto cur = ViolatingDigests(v);
      if (!first) {
        EXPECT_TRUE(Subset(cur, prev)) << t;
      }
      prev = cur;
      first = false;
    }
  }
}

TEST(VerifyLocal, DedupDoesNotChangeTheVerdict) {
  auto model = Builtin("mean-intensity", 8);
  const Image img = random_image(8, 8, 1, 5);
  const auto prop = Prop(TransformKind::kBrightness, default_space(TransformKind::kBrightness));
  VerifyOptions off;
  off.dedup = false;
  const auto a = verify_local(model, img, "d", prop);
  const auto b = verify_local(model, img, "d", prop, off);
  EXPECT_EQ(a.raw_violation_count(), b.raw_violation_count());
  EXPECT_EQ(ViolatingDigests(a), ViolatingDigests(b));
  EXPECT_LE(a.stats.model_calls, b.stats.model_calls);
}

TEST(VerifyLocal, IndependentOfBatchSizeAndWorkers) {
  const Image img = random_image(10, 10, 1, 6);
  const auto prop = Prop(TransformKind::kRotation, ParamSpace::scalar(-30, 30));
  auto summarize = [](const Verdict& v) {
    std::vector<std::pair<Digest, std::vector<ParamValue>>> out;
    for (const auto& x : v.violations) out.emplace_back(x.digest, x.params);
    return out;
  };
  auto model = Builtin("mean-intensity");
  VerifyOptions opts;
  opts.batch_size = 1;
  opts.workers = 1;
  const auto ref = summarize(verify_local(model, img, "b", prop, opts));
  EXPECT_FALSE(ref.empty());
  for (std::size_t batch : {3u, 64u, 1000u}) {
    opts.batch_size = batch;
    opts.workers = 3;
    EXPECT_EQ(summarize(verify_local(model, img, "b", prop, opts)), ref) << batch;
  }
}

TEST(VerifyLocal, ViolationsReproduce) {
  auto model = Builtin("mean-intensity");
  const Image img = random_image(12, 12, 1, 7);
  const auto prop = Prop(TransformKind::kContrast, default_space(TransformKind::kContrast));
  const auto v = verify_local(model, img, "p", prop);
  ASSERT_FALSE(v.verified());
  const auto predictor = make_builtin("mean-intensity");
  for (const auto& x : v.violations) {
    const Image out = apply(prop.transform, img, x.param);
    EXPECT_EQ(image_digest(out), x.digest);
    EXPECT_EQ(to_string(predictor->predict(out)), to_string(x.transformed));
    EXPECT_FALSE(check_k_safe(x.original, x.transformed, 1));
  }
}

TEST(VerifyLocal, CompositeProperty) {
  auto model = Builtin("mean-intensity");
  const Image img = random_image(8, 8, 1, 8);
  SafetyProperty prop{"erode+bright",
                      TransformSpec::composite({TransformSpec::of(TransformKind::kErosion),
                                                TransformSpec::of(TransformKind::kBrightness)}),
                      ParamSpace::composite({default_space(TransformKind::kErosion),
                                             ParamSpace::scalar(-40, 40, true)}),
                      KSafe{1}};
  const auto v = verify_local(model, img, "c", prop);
  EXPECT_EQ(v.stats.critical_values, 4u * 81u);
  for (const auto& x : v.violations) {
    EXPECT_EQ(image_digest(apply(prop.transform, img, x.param)), x.digest);
  }
}

TEST(VerifyLocal, TaskMismatchThrows) {
  auto model = Builtin("centroid");
  EXPECT_THROW(verify_local(model, random_image(4, 4, 1, 9), "m",
                            Prop(TransformKind::kBrightness, ParamSpace::scalar(0, 2, true))),
               DomainError);
}

TEST(VerifyLocal, BudgetExhaustion) {
  auto model = Builtin("mean-intensity");
  model.set_query_budget(10);
  EXPECT_THROW(verify_local(model, random_image(8, 8, 1, 10), "b",
                            Prop(TransformKind::kBrightness,
                                 default_space(TransformKind::kBrightness))),
               BudgetExhausted);
}

}  // namespace
}  // namespace imverify
