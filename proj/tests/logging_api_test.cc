// Copyright 2026 The provtrack Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "demo_run.h"
#include "provtrack/digest.h"
#include "provtrack/error.h"
#include "provtrack/graph_export.h"
#include "provtrack/prov_json.h"
#include "provtrack/run.h"
#include "temp_dir.h"

namespace provtrack {
namespace {

using testing::read_file;
using testing::TempDir;
using testing::write_file;

// SHA-256 oracles computed with Python's hashlib.
constexpr const char* kEmptySha256 =
    "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855";
constexpr const char* kAbcSha256 =
    "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad";

class LoggingTest : public ::testing::Test {
 protected:
  void SetUp() override {
    clock_ = std::make_shared<ManualClock>(10000);
    RunConfig config;
    config.user_namespace = "urn:test:";
    config.experiment_name = "exp";
    config.save_dir = dir_.path() / "prov";
    config.rank = 0;
    config.save_after_n_logs = 10;
    run_.emplace(start_run(config, testing::demo_services(clock_)));
  }

  void TearDown() override {
    if (run_ && run_->active()) run_->end_run();
  }

  ProvDocument finish() {
    EndRunResult result = run_->end_run();
    return read_document(result.document.string());
  }

  static ErrorCode code_of(const std::function<void()>& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::kInvalidArgument;
  }

  static QualifiedName user(const std::string& local) { return QualifiedName("user", local); }
  static QualifiedName vocab(const std::string& local) {
    return QualifiedName("prov4ml", local);
  }

  TempDir dir_;
  std::shared_ptr<ManualClock> clock_;
  std::optional<RunHandle> run_;
};

TEST_F(LoggingTest, DuplicateParamRejectedAndFirstValueKept) {
  run_->log_param("lr", 0.01);
  EXPECT_EQ(code_of([&] { run_->log_param("lr", 0.02); }), ErrorCode::kDuplicateParam);
  EXPECT_EQ(code_of([&] { run_->log_param("", 1); }), ErrorCode::kInvalidArgument);
  ProvDocument doc = finish();
  const ProvRecord* p = doc.find(RecordKind::kEntity, user("param.lr"));
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(*p->find(vocab("value")), AttributeValue(0.01));
}

TEST_F(LoggingTest, HundredParamsBecomeHundredEntities) {
  for (int i = 0; i < 100; ++i) run_->log_param("p" + std::to_string(i), i);
  ProvDocument doc = finish();
  std::size_t params = 0;
  for (const auto& r : doc.records()) {
    const AttributeValue* t = r.find(QualifiedName("prov", "type"));
    if (t && t->text() == record_types::kParameter) ++params;
  }
  EXPECT_EQ(params, 100u);
  EXPECT_EQ(doc.count(RelationKind::kUsed), 101u);  // plus the environment
}

TEST_F(LoggingTest, ParamValueTypesSurvive) {
  run_->log_param("s", "text");
  run_->log_param("i", std::int64_t{-5});
  run_->log_param("d", 2.5);
  run_->log_param("b", true);
  ProvDocument doc = finish();
  EXPECT_EQ(doc.find(RecordKind::kEntity, user("param.s"))->find(vocab("value"))->type(),
            "xsd:string");
  EXPECT_EQ(doc.find(RecordKind::kEntity, user("param.i"))->find(vocab("value"))->type(),
            "xsd:long");
  EXPECT_EQ(doc.find(RecordKind::kEntity, user("param.d"))->find(vocab("value"))->type(),
            "xsd:double");
  EXPECT_EQ(doc.find(RecordKind::kEntity, user("param.b"))->find(vocab("value"))->type(),
            "xsd:boolean");
}

TEST_F(LoggingTest, ContextsSeparateSeries) {
  run_->log_metric("loss", 1.0, Context::training(), 0);
  run_->log_metric("loss", 2.0, Context::validation(), 0);
  run_->log_metric("loss", 3.0, Context::custom("test_set"), 0);
  run_->log_metric("loss", 0.5, Context::training(), 1);
  EXPECT_EQ(run_->series_count(), 3u);
  auto training = run_->series_summary("loss", Context::training());
  ASSERT_TRUE(training);
  EXPECT_EQ(training->count, 2u);
  EXPECT_EQ(training->last, 0.5);
  EXPECT_EQ(training->series_file, "metrics/training_loss.tsv");
  EXPECT_FALSE(run_->series_summary("loss", Context::evaluation()));

  ProvDocument doc = finish();
  EXPECT_NE(doc.find(RecordKind::kEntity, user("metric.validation_loss")), nullptr);
  EXPECT_EQ(doc.count(RelationKind::kWasGeneratedBy), 3u);
}

TEST_F(LoggingTest, BadMetricLeavesNoSeries) {
  EXPECT_EQ(code_of([&] { run_->log_metric("m", std::nan(""), Context::training(), 0); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { run_->log_metric("m", 1.0, Context::training(), -3); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { run_->log_metric("", 1.0, Context::training(), 0); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(run_->series_count(), 0u);
}

TEST_F(LoggingTest, MetricsSpillDuringTheRun) {
  for (int i = 0; i < 25; ++i) run_->log_metric("m", i, Context::training(), i);
  auto counts = run_->series_counts("m", Context::training());
  ASSERT_TRUE(counts);
  EXPECT_EQ(counts->first, 20u);
  EXPECT_EQ(counts->second, 5u);
  std::filesystem::path spill = run_->run_dir() / "metrics" / "training_m.tsv";
  EXPECT_EQ(read_spill_file(spill).size(), 20u);
  finish();
  EXPECT_EQ(read_spill_file(spill).size(), 25u);
}

TEST_F(LoggingTest, EmptyArtifactHashesToKnownDigest) {
  write_file(dir_ / "empty.bin", "");
  ArtifactRecord a = run_->log_artifact("weights", dir_ / "empty.bin");
  EXPECT_EQ(a.content_hash, kEmptySha256);
  EXPECT_EQ(a.size_bytes, 0u);
  EXPECT_EQ(a.path, "artifacts/empty.bin");
  EXPECT_EQ(a.timestamp_ms, 10000);
}

TEST_F(LoggingTest, ArtifactCopyAndContextDirectory) {
  write_file(dir_ / "abc.txt", "abc");
  ArtifactRecord a =
      run_->log_artifact("notes", dir_ / "abc.txt", Context::validation(), 4, 777);
  EXPECT_EQ(a.path, "artifacts/validation/abc.txt");
  EXPECT_EQ(a.content_hash, kAbcSha256);
  EXPECT_EQ(a.size_bytes, 3u);
  EXPECT_EQ(a.step, 4);
  EXPECT_EQ(a.timestamp_ms, 777);
  EXPECT_EQ(read_file(run_->run_dir() / a.path), "abc");

  ProvDocument doc = finish();
  const ProvRecord* r = doc.find(RecordKind::kEntity, user("artifact.notes.0"));
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->find(vocab("content_hash"))->text(), kAbcSha256);
  EXPECT_EQ(r->find(vocab("timestamp"))->text(), "1970-01-01T00:00:00.777Z");
}

TEST_F(LoggingTest, SameFileTwiceKeepsBothCopies) {
  write_file(dir_ / "f.txt", "one");
  ArtifactRecord first = run_->log_artifact("f", dir_ / "f.txt");
  write_file(dir_ / "f.txt", "two");
  ArtifactRecord second = run_->log_artifact("f", dir_ / "f.txt");
  EXPECT_EQ(first.path, "artifacts/f.txt");
  EXPECT_EQ(second.path, "artifacts/f.1.txt");
  EXPECT_EQ(read_file(run_->run_dir() / first.path), "one");
  EXPECT_EQ(read_file(run_->run_dir() / second.path), "two");
  ProvDocument doc = finish();
  EXPECT_NE(doc.find(RecordKind::kEntity, user("artifact.f.0")), nullptr);
  EXPECT_NE(doc.find(RecordKind::kEntity, user("artifact.f.1")), nullptr);
}

TEST_F(LoggingTest, MissingArtifactIsIo) {
  EXPECT_EQ(code_of([&] { run_->log_artifact("x", dir_ / "nope"); }), ErrorCode::kIo);
  EXPECT_EQ(code_of([&] { run_->log_artifact("x", dir_.path()); }), ErrorCode::kIo);
}

TEST_F(LoggingTest, ModelLoggedOnce) {
  ModelDescriptor m;
  m.total_parameters = 10;
  m.layers.push_back({"fc", "Linear", {4}, {2}, "float32"});
  run_->log_model("net", m, /*log_as_artifact=*/true);
  EXPECT_EQ(code_of([&] { run_->log_model("net2", m); }), ErrorCode::kDuplicateParam);
  EXPECT_TRUE(std::filesystem::exists(run_->run_dir() / "artifacts" / "net.json"));
  ProvDocument doc = finish();
  const ProvRecord* model = doc.find(RecordKind::kEntity, user("model.net"));
  ASSERT_NE(model, nullptr);
  EXPECT_EQ(*model->find(vocab("layer_count")), AttributeValue(1));
  EXPECT_EQ(model->find(vocab("layer.0.input_shape"))->text(), "[4]");
  EXPECT_NE(doc.find(RecordKind::kEntity, user("artifact.net.0")), nullptr);
}

TEST_F(LoggingTest, ModelVersionsFormAChain) {
  for (int step = 0; step < 5; ++step) {
    ArtifactRecord v = run_->save_model_version("ckpt", "blob" + std::to_string(step),
                                                Context::training(), step);
    EXPECT_EQ(v.path, "artifacts/ckpt/ckpt_step" + std::to_string(step));
  }
  ProvDocument doc = finish();
  ASSERT_EQ(doc.count(RelationKind::kWasDerivedFrom), 4u);
  for (const auto& rel : doc.relations()) {
    if (rel.kind != RelationKind::kWasDerivedFrom) continue;
    int later = std::stoi(rel.subject.unescaped_local().substr(std::string("model_version.ckpt.").size()));
    int earlier = std::stoi(rel.object.unescaped_local().substr(std::string("model_version.ckpt.").size()));
    EXPECT_EQ(later, earlier + 1);
  }
}

TEST_F(LoggingTest, SeparateVersionLabelsFormSeparateChains) {
  run_->save_model_version("a", "1", Context::training(), 0);
  run_->save_model_version("b", "1", Context::training(), 0);
  run_->save_model_version("a", "2", Context::training(), 1);
  run_->save_model_version("b", "2", Context::training(), 1);
  ProvDocument doc = finish();
  EXPECT_EQ(doc.count(RelationKind::kWasDerivedFrom), 2u);
}

TEST_F(LoggingTest, DatasetsAreUsed) {
  DatasetDescriptor d;
  d.label = "train";
  d.num_samples = 60000;
  run_->log_dataset(d);
  EXPECT_EQ(code_of([&] { run_->log_dataset(d); }), ErrorCode::kDuplicateParam);
  d.label = "test";
  d.source = "MNIST";
  run_->log_dataset(d);
  ProvDocument doc = finish();
  const ProvRecord* train = doc.find(RecordKind::kEntity, user("dataset.train"));
  ASSERT_NE(train, nullptr);
  EXPECT_EQ(*train->find(vocab("num_samples")), AttributeValue(60000));
  EXPECT_EQ(train->find(vocab("source")), nullptr);
  EXPECT_EQ(doc.count(RelationKind::kUsed), 3u);
}

TEST_F(LoggingTest, ExecutionTimeMeasuresFromStart) {
  clock_->advance(1500);
  run_->log_current_execution_time("elapsed", Context::training(), 0);
  clock_->advance(1500);
  run_->log_current_execution_time("elapsed", Context::training(), 1);
  auto s = run_->series_summary("elapsed", Context::training());
  ASSERT_TRUE(s);
  EXPECT_EQ(s->min, 1.5);
  EXPECT_EQ(s->max, 3.0);
  EXPECT_EQ(s->last - s->min, 1.5);
}

TEST_F(LoggingTest, ConcurrentLoggingLosesNothing) {
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([this, t] {
      for (int i = 0; i < 250; ++i) {
        run_->log_metric("m" + std::to_string(t % 2), i, Context::training(), i);
      }
    });
  }
  for (auto& t : threads) t.join();
  finish();
  EXPECT_EQ(read_spill_file(run_->run_dir() / "metrics" / "training_m0.tsv").size(), 500u);
  EXPECT_EQ(read_spill_file(run_->run_dir() / "metrics" / "training_m1.tsv").size(), 500u);
}

// Property: for random logging sequences the document's per-series counts
// equal what was logged, the spill file holds exactly those samples in
// order, and every artifact hash matches the bytes on disk.
TEST(LoggingProperty, CountConservationAndArtifactIntegrity) {
  std::mt19937_64 rng(99);
  const Context contexts[] = {Context::training(), Context::validation(),
                              Context::custom("probe_1")};
  for (int trial = 0; trial < 20; ++trial) {
    TempDir dir;
    RunConfig config;
    config.user_namespace = "urn:p:";
    config.experiment_name = "prop";
    config.save_dir = dir / "prov";
    config.rank = 0;
    config.save_after_n_logs = 1 + rng() % 20;
    RunHandle run = start_run(config, testing::demo_services(std::make_shared<ManualClock>(0)));

    std::map<std::pair<std::string, Context>, std::vector<std::pair<std::int64_t, double>>>
        logged;
    int artifacts = 0;
    int n_ops = 50 + static_cast<int>(rng() % 200);
    for (int i = 0; i < n_ops; ++i) {
      if (rng() % 10 == 0) {
        std::string bytes(rng() % 64, 'x');
        for (auto& c : bytes) c = static_cast<char>(rng());
        auto src = dir / ("src" + std::to_string(artifacts++));
        write_file(src, bytes);
        run.log_artifact("a", src, contexts[rng() % 3]);
        continue;
      }
      std::string key = "k" + std::to_string(rng() % 4);
      const Context& ctx = contexts[rng() % 3];
      std::int64_t step = static_cast<std::int64_t>(rng() % 50);
      double value = static_cast<double>(static_cast<std::int64_t>(rng() % 2001) - 1000) / 8;
      run.log_metric(key, value, ctx, step);
      logged[{key, ctx}].emplace_back(step, value);
    }
    EndRunResult result = run.end_run();
    ProvDocument doc = read_document(result.document.string());

    std::size_t metric_entities = 0, artifact_entities = 0;
    for (const auto& r : doc.records()) {
      const AttributeValue* t = r.find(QualifiedName("prov", "type"));
      if (!t) continue;
      if (t->text() == record_types::kMetric) {
        ++metric_entities;
        std::string key = r.find(QualifiedName("prov4ml", "key"))->text();
        Context ctx = Context::from_string(r.find(QualifiedName("prov4ml", "context"))->text());
        const auto& expected = logged.at({key, ctx});
        ASSERT_EQ(r.find(QualifiedName("prov4ml", "count"))->as_long(),
                  static_cast<std::int64_t>(expected.size()));
        auto samples = read_spill_file(
            run.run_dir() / r.find(QualifiedName("prov4ml", "series_file"))->text());
        ASSERT_EQ(samples.size(), expected.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
          ASSERT_EQ(samples[i].step, expected[i].first);
          ASSERT_EQ(samples[i].value, expected[i].second);
        }
      } else if (t->text() == record_types::kArtifact) {
        ++artifact_entities;
        auto path = run.run_dir() / r.find(QualifiedName("prov4ml", "path"))->text();
        ASSERT_EQ(sha256_file(path), r.find(QualifiedName("prov4ml", "content_hash"))->text());
        ASSERT_EQ(static_cast<std::int64_t>(std::filesystem::file_size(path)),
                  r.find(QualifiedName("prov4ml", "size_bytes"))->as_long());
      }
    }
    ASSERT_EQ(metric_entities, logged.size());
    ASSERT_EQ(artifact_entities, static_cast<std::size_t>(artifacts));
  }
}

}  // namespace
}  // namespace provtrack
