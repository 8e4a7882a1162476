#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qtl/checkpoint.hpp"
#include "qtl/commands.hpp"
#include "qtl/config.hpp"
#include "qtl/dataset.hpp"
#include "qtl/errors.hpp"
#include "qtl/pgm.hpp"
#include "qtl/rng.hpp"

using namespace qtl;
namespace fs = std::filesystem;

namespace {

class TempDir {
  public:
    explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / ("qtl_cli_" + name)) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& child) const { return path_ / child; }

  private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

// Small but complete run: 40 samples, 32 features, 3 epochs.
const char* kSmallConfig =
    "# quick run\n"
    "mode = dqc\n"
    "embedding = angle\n"
    "n_qubits = 2\n"
    "epochs = 3\n"
    "lr = 0.001\n"
    "synth_n_per_class = 20\n"
    "synth_dim = 32\n"
    "synth_separation = 4\n"
    "seed = 11\n";

std::map<std::string, std::string> read_manifest(const fs::path& p) { return parse_key_values(slurp(p)); }

}  // namespace

TEST(Config, ParsesAndDefaults) {
    const TrainConfig def = parse_config("");
    EXPECT_EQ(def.batch_size, 8u);
    EXPECT_DOUBLE_EQ(def.lr, 1e-4);
    EXPECT_DOUBLE_EQ(def.weight_decay, 0.01);
    EXPECT_EQ(def.split, (std::array<double, 3>{0.7, 0.15, 0.15}));
    EXPECT_EQ(def.resolved_embedding(), EmbeddingKind::Angle);
    EXPECT_EQ(def.resolved_qubits(512), 4u);

    const TrainConfig c = parse_config("mode = purevqc  # comment\n\ndepth = 4\nsplit = 0.6, 0.2, 0.2\nseed=9\n");
    EXPECT_EQ(c.mode, HeadMode::PureVqc);
    EXPECT_EQ(c.resolved_embedding(), EmbeddingKind::Amplitude);
    EXPECT_EQ(c.resolved_qubits(512), 9u);
    EXPECT_EQ(c.depth, 4u);
    EXPECT_EQ(c.seed, 9u);
    EXPECT_DOUBLE_EQ(c.split[0], 0.6);
}

TEST(Config, Rejections) {
    EXPECT_THROW(parse_config("bogus = 1\n"), ConfigError);
    EXPECT_THROW(parse_config("depth = 1\ndepth = 2\n"), ConfigError);
    EXPECT_THROW(parse_config("depth = two\n"), ConfigError);
    EXPECT_THROW(parse_config("depth\n"), ConfigError);
    EXPECT_THROW(parse_config("lr = -1\n"), ConfigError);
    EXPECT_THROW(parse_config("split = 0.5, 0.5\n"), ConfigError);
    EXPECT_THROW(parse_config("mode = dqc\nembedding = amplitude\n"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/x.cfg"), ConfigError);
    try {
        parse_config("mode = purevqc\nembedding = angle\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("'mode'"), std::string::npos) << msg;
        EXPECT_NE(msg.find("'embedding'"), std::string::npos) << msg;
    }
}

TEST(Config, RenderRoundTrips) {
    const TrainConfig c = parse_config(kSmallConfig);
    const std::string text = render_config(c);
    EXPECT_EQ(render_config(parse_config(text)), text);
    EXPECT_NE(text.find("batch_size = 8"), std::string::npos);
    EXPECT_NE(text.find("lr = 0.001"), std::string::npos);
    // Manifest lines are accepted and ignored.
    EXPECT_EQ(render_config(parse_config(text + "code_version = 1.0.0\nresult.best_epoch = 3\n")), text);
}

TEST(Checkpoint, RoundTripAndCorruption) {
    Rng rng(4);
    for (const HybridModel& m : {make_dqc({16, 3, 2, 3, EmbeddingKind::DenseAngle, RotationAxis::Z, AngleAxis::X}, rng),
                                 make_pure_vqc(16, 2, 2, RotationAxis::X, rng)}) {
        const std::string bytes = encode_checkpoint(m);
        EXPECT_EQ(bytes.substr(0, 7), "QTLSIM1");
        const HybridModel back = decode_checkpoint(bytes);
        EXPECT_EQ(back.flatten(), m.flatten());
        EXPECT_EQ(back.mode, m.mode);
        EXPECT_EQ(back.embedding, m.embedding);
        EXPECT_EQ(back.angle_axis, m.angle_axis);
        EXPECT_EQ(back.vqc.axis, m.vqc.axis);
        EXPECT_EQ(back.vqc.depth, m.vqc.depth);
        EXPECT_EQ(encode_checkpoint(back), bytes);

        std::string bad = bytes;
        bad[6] = '2';
        EXPECT_THROW(decode_checkpoint(bad), FormatError);
        EXPECT_THROW(decode_checkpoint(bytes.substr(0, bytes.size() - 3)), FormatError);
        EXPECT_THROW(decode_checkpoint(bytes + "x"), FormatError);
        EXPECT_THROW(decode_checkpoint(""), FormatError);
    }
    EXPECT_THROW(load_checkpoint("/nonexistent/ckpt.bin"), FormatError);
}

TEST(CmdTrain, WritesArtifactsDeterministically) {
    TempDir dir("train");
    write_file(dir / "run.cfg", kSmallConfig);
    std::ostringstream out, err;
    ASSERT_EQ(cli::cmd_train({dir / "run.cfg", std::nullopt, dir / "a", std::nullopt}, out, err), 0) << err.str();
    ASSERT_EQ(cli::cmd_train({dir / "run.cfg", std::nullopt, dir / "b", std::nullopt}, out, err), 0) << err.str();
    for (const char* f : {cli::kMetricsFile, cli::kCheckpointFile, cli::kManifestFile}) {
        ASSERT_TRUE(fs::exists(dir.path() / "a" / f)) << f;
        EXPECT_EQ(slurp(dir.path() / "a" / f), slurp(dir.path() / "b" / f)) << f;
    }
    const std::string metrics = slurp(dir.path() / "a" / cli::kMetricsFile);
    EXPECT_EQ(metrics.rfind("split,epoch,loss,accuracy,auroc\ntrain,1,", 0), 0u);
    EXPECT_EQ(std::count(metrics.begin(), metrics.end(), '\n'), 7);

    const auto kv = read_manifest(dir.path() / "a" / cli::kManifestFile);
    EXPECT_EQ(kv.at("code_version"), QTL_VERSION);
    EXPECT_EQ(kv.at("batch_size"), "8");
    EXPECT_EQ(kv.at("result.classes"), "class0,class1");
    EXPECT_EQ(kv.at("result.train_size"), "28");

    // A manifest is a complete config; rerunning it reproduces the run.
    ASSERT_EQ(cli::cmd_train({dir.path() / "a" / cli::kManifestFile, std::nullopt, dir / "c", std::nullopt}, out, err), 0);
    EXPECT_EQ(slurp(dir.path() / "c" / cli::kMetricsFile), metrics);

    // The seed flag overrides the config.
    ASSERT_EQ(cli::cmd_train({dir / "run.cfg", std::nullopt, dir / "d", 12}, out, err), 0);
    EXPECT_NE(slurp(dir.path() / "d" / cli::kMetricsFile), metrics);
    EXPECT_EQ(read_manifest(dir.path() / "d" / cli::kManifestFile).at("seed"), "12");
}

TEST(CmdTrain, ErrorExitCodes) {
    TempDir dir("train_err");
    std::ostringstream out, err;
    write_file(dir / "bad.cfg", "mode = purevqc\nembedding = angle\n");
    EXPECT_EQ(cli::cmd_train({dir / "bad.cfg", std::nullopt, dir / "o", std::nullopt}, out, err), 2);
    EXPECT_NE(err.str().find("'embedding'"), std::string::npos);
    fs::create_directories(dir / "empty");
    write_file(dir / "ok.cfg", kSmallConfig);
    EXPECT_EQ(cli::cmd_train({dir / "ok.cfg", (dir / "empty").string(), dir / "o", std::nullopt}, out, err), 3);
    EXPECT_EQ(cli::cmd_train({dir / "ok.cfg", (dir / "missing.csv").string(), dir / "o", std::nullopt}, out, err), 3);
    // Gradient descent with this step size overflows the parameters.
    write_file(dir / "nan.cfg", std::string(kSmallConfig) + "optimizer = gd\nweight_decay = 1\n");
    std::string text = slurp(dir / "nan.cfg");
    text.replace(text.find("lr = 0.001"), 10, "lr = 1e308");
    write_file(dir / "nan.cfg", text);
    EXPECT_EQ(cli::cmd_train({dir / "nan.cfg", std::nullopt, dir / "o", std::nullopt}, out, err), 4);
}

TEST(CmdEvaluate, ReproducesBestValidationMetrics) {
    TempDir dir("eval");
    write_file(dir / "run.cfg", std::string(kSmallConfig) + "export_splits = true\n");
    std::ostringstream out, err;
    ASSERT_EQ(cli::cmd_train({dir / "run.cfg", std::nullopt, dir / "run", std::nullopt}, out, err), 0) << err.str();
    ASSERT_TRUE(fs::exists(dir.path() / "run" / "val.csv"));
    std::ostringstream eval_out;
    ASSERT_EQ(cli::cmd_evaluate({dir.path() / "run" / cli::kCheckpointFile, (dir.path() / "run" / "val.csv").string(),
                                 std::nullopt},
                                eval_out, err),
              0)
        << err.str();
    const auto kv = read_manifest(dir.path() / "run" / cli::kManifestFile);
    std::istringstream lines(eval_out.str());
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    EXPECT_EQ(header, "split,epoch,loss,accuracy,auroc");
    std::vector<std::string> cells;
    std::stringstream rs(row);
    for (std::string cell; std::getline(rs, cell, ',');) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 5u);
    EXPECT_NEAR(std::stod(cells[2]), std::stod(kv.at("result.best_val_loss")), 1e-12);
    EXPECT_NEAR(std::stod(cells[3]), std::stod(kv.at("result.best_val_accuracy")), 1e-12);
    EXPECT_NEAR(std::stod(cells[4]), std::stod(kv.at("result.best_val_auroc")), 1e-12);
    EXPECT_NE(eval_out.str().find("confusion"), std::string::npos);
}

TEST(CmdEvaluate, ErrorExitCodes) {
    TempDir dir("eval_err");
    std::ostringstream out, err;
    Rng rng(1);
    save_checkpoint(dir / "ok.bin", make_dqc({4, 2, 1, 2}, rng));
    std::string bytes = slurp(dir / "ok.bin");
    bytes[0] = 'X';
    write_file(dir / "corrupt.bin", bytes);
    write_file(dir / "data.csv", "group_id,label,f0,f1,f2,f3\np,a,1,2,3,4\nq,b,1,2,3,5\n");
    EXPECT_EQ(cli::cmd_evaluate({dir / "corrupt.bin", (dir / "data.csv").string(), std::nullopt}, out, err), 5);
    fs::create_directories(dir / "empty");
    EXPECT_EQ(cli::cmd_evaluate({dir / "ok.bin", (dir / "empty").string(), std::nullopt}, out, err), 3);
    EXPECT_EQ(cli::cmd_evaluate({dir / "ok.bin", (dir / "data.csv").string(), std::nullopt}, out, err), 0) << err.str();
    write_file(dir / "wide.csv", "group_id,label,f0,f1,f2\np,a,1,2,3\nq,b,1,2,3\n");
    EXPECT_EQ(cli::cmd_evaluate({dir / "ok.bin", (dir / "wide.csv").string(), std::nullopt}, out, err), 3);
}

TEST(CmdEncodeDemo, Schemes) {
    TempDir dir("encode");
    Rng rng(2);
    std::vector<std::uint8_t> px(16);
    for (auto& p : px) p = static_cast<std::uint8_t>(rng.below(256));
    write_pgm(dir / "img.pgm", GrayImage(4, px));
    std::ostringstream neqr, frqi, amp, err;
    ASSERT_EQ(cli::cmd_encode_demo(dir / "img.pgm", "neqr", neqr, err), 0) << err.str();
    EXPECT_NE(neqr.str().find("qubits: 12\n"), std::string::npos) << neqr.str();
    EXPECT_NE(neqr.str().find("max round-trip error: 0\n"), std::string::npos) << neqr.str();
    ASSERT_EQ(cli::cmd_encode_demo(dir / "img.pgm", "frqi", frqi, err), 0) << err.str();
    EXPECT_NE(frqi.str().find("qubits: 5\n"), std::string::npos);
    const auto pos = frqi.str().find("max round-trip error: ");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_LT(std::stod(frqi.str().substr(pos + 22)), 1e-9);

    std::string list;
    for (int i = 0; i < 512; ++i) list += std::to_string(0.01 * (i % 17) + 0.5) + "\n";
    write_file(dir / "features.txt", list);
    ASSERT_EQ(cli::cmd_encode_demo(dir / "features.txt", "amplitude", amp, err), 0) << err.str();
    EXPECT_NE(amp.str().find("9 qubits"), std::string::npos) << amp.str();

    std::ostringstream o;
    EXPECT_EQ(cli::cmd_encode_demo(dir / "img.pgm", "bogus", o, err), 2);
    write_file(dir / "bad.pgm", "P2 1 7 255\n1 2 3 4 5 6 7\n");
    EXPECT_EQ(cli::cmd_encode_demo(dir / "bad.pgm", "frqi", o, err), 3);
}

TEST(CmdGradCheck, DefaultAndBrokenShift) {
    std::ostringstream out, err;
    EXPECT_EQ(cli::cmd_grad_check({}, out, err), 0) << out.str() << err.str();
    EXPECT_NE(out.str().find("PASS"), std::string::npos);
    cli::GradCheckArgs broken;
    broken.shift = std::numbers::pi / 4;
    std::ostringstream bout;
    EXPECT_EQ(cli::cmd_grad_check(broken, bout, err), 1) << bout.str();
    EXPECT_NE(bout.str().find("FAIL"), std::string::npos);
}

TEST(CmdGradCheck, PureVqcNineQubits) {
    TempDir dir("gradcheck");
    write_file(dir / "p.cfg", "mode = purevqc\ndepth = 1\nseed = 3\n");
    std::ostringstream out, err;
    EXPECT_EQ(cli::cmd_grad_check({.config = dir / "p.cfg"}, out, err), 0) << out.str() << err.str();
    EXPECT_NE(out.str().find("qubits: 9"), std::string::npos) << out.str();
}

TEST(GradientDiscrepancy, Floor) {
    EXPECT_DOUBLE_EQ(cli::gradient_discrepancy(1.0, 1.0), 0.0);
    EXPECT_NEAR(cli::gradient_discrepancy(2.0, 1.0), 0.5, 1e-15);
    EXPECT_NEAR(cli::gradient_discrepancy(1e-9, 0.0), 1e-6, 1e-18);
}
