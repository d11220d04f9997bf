#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "salmap/imageio.hpp"
#include "support/synthetic.hpp"

using namespace salmap;
using salmap::testing::TempDir;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(SALMAP_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct SceneFiles {
    TempDir dir{"salmap-cli"};
    fs::path rgb, depth, gt;
    SceneFiles() {
        const auto scene = salmap::testing::disk_scene(80, 60);
        rgb = dir.path() / "rgb.png";
        depth = dir.path() / "depth.png";
        gt = dir.path() / "gt.png";
        save_rgb(scene.rgb, rgb);
        save_saliency(scene.depth.values, depth);
        SaliencyMap mask(80, 60);
        for (std::size_t i = 0; i < mask.pixels(); ++i) mask.data[i] = scene.gt.data[i];
        save_saliency(mask, gt);
    }
};

}  // namespace

TEST_CASE("detect writes a saliency map and exits zero") {
    SceneFiles f;
    const fs::path out = f.dir.path() / "out.png";
    const int rc = run("detect --rgb " + f.rgb.string() + " --depth " + f.depth.string() +
                       " --out " + out.string() + " --k 8 --threads 1");
    CHECK(rc == 0);
    REQUIRE(fs::exists(out));
    const SaliencyMap map = load_gray(out);
    CHECK(map.width == 80);
    for (const float v : map.data) {
        CHECK(v >= 0.f);
        CHECK(v <= 1.f);
    }
}

TEST_CASE("detect is byte-identical across invocations") {
    SceneFiles f;
    const fs::path a = f.dir.path() / "a.png";
    const fs::path b = f.dir.path() / "b.png";
    const std::string common = "detect --rgb " + f.rgb.string() + " --depth " +
                               f.depth.string() + " --k 8 --threads 1 --out ";
    REQUIRE(run(common + a.string()) == 0);
    REQUIRE(run(common + b.string()) == 0);
    CHECK(read_file(a) == read_file(b));
}

TEST_CASE("missing required flag exits 2") {
    SceneFiles f;
    CHECK(run("detect --rgb " + f.rgb.string() + " --out x.png") == 2);
}

TEST_CASE("violated parameter invariants exit 2") {
    SceneFiles f;
    const std::string base = "detect --rgb " + f.rgb.string() + " --depth " +
                             f.depth.string() + " --out " +
                             (f.dir.path() / "x.png").string();
    CHECK(run(base + " --sigma2 0") == 2);
    CHECK(run(base + " --beta 0") == 2);
    CHECK(run(base + " --k 1") == 2);
}

TEST_CASE("unreadable input exits 1") {
    SceneFiles f;
    CHECK(run("detect --rgb /nonexistent.png --depth " + f.depth.string() + " --out " +
              (f.dir.path() / "x.png").string()) == 1);
}

TEST_CASE("emit-intermediates writes the per-layer maps") {
    SceneFiles f;
    const fs::path inter = f.dir.path() / "layers";
    const int rc = run("detect --rgb " + f.rgb.string() + " --depth " + f.depth.string() +
                       " --out " + (f.dir.path() / "out.png").string() +
                       " --k 8 --threads 1 --emit-intermediates " + inter.string());
    CHECK(rc == 0);
    for (const char* name : {"s1hat.png", "s2hat.png", "extended.png",
                             "depth_filtered.png", "depth_polarized.png"})
        CHECK(fs::exists(inter / name));
}

TEST_CASE("detect honors an external center-bias map") {
    SceneFiles f;
    SaliencyMap wc(80, 60);
    for (int y = 0; y < 60; ++y)
        for (int x = 0; x < 80; ++x)
            wc.at(x, y) = 1.f - std::abs(x - 40) / 40.f;
    save_saliency(wc, f.dir.path() / "wc.png");
    const int rc = run("detect --rgb " + f.rgb.string() + " --depth " + f.depth.string() +
                       " --out " + (f.dir.path() / "out.png").string() +
                       " --k 8 --threads 1 --center-bias-map " +
                       (f.dir.path() / "wc.png").string());
    CHECK(rc == 0);

    // mismatched dimensions are an I/O failure
    save_saliency(SaliencyMap(10, 10, 0.5f), f.dir.path() / "small.png");
    CHECK(run("detect --rgb " + f.rgb.string() + " --depth " + f.depth.string() +
              " --out " + (f.dir.path() / "out.png").string() +
              " --center-bias-map " + (f.dir.path() / "small.png").string()) == 1);
}

TEST_CASE("detect-batch processes a dataset and eval scores it") {
    TempDir dir("salmap-batch");
    fs::create_directories(dir.path() / "rgb");
    fs::create_directories(dir.path() / "depth");
    fs::create_directories(dir.path() / "gt");
    for (int i = 0; i < 3; ++i) {
        const auto scene = salmap::testing::disk_scene(64, 48);
        const std::string id = "img" + std::to_string(i);
        save_rgb(scene.rgb, dir.path() / "rgb" / (id + ".png"));
        save_saliency(scene.depth.values, dir.path() / "depth" / (id + ".png"));
        SaliencyMap mask(64, 48);
        for (std::size_t p = 0; p < mask.pixels(); ++p) mask.data[p] = scene.gt.data[p];
        save_saliency(mask, dir.path() / "gt" / (id + ".png"));
    }
    const fs::path out = dir.path() / "pred";
    const int rc = run("detect-batch --dataset " + dir.path().string() + " --out-dir " +
                       out.string() + " --k 8 --jobs 2 --emit-intermediates");
    CHECK(rc == 0);
    for (int i = 0; i < 3; ++i) {
        CHECK(fs::exists(out / ("img" + std::to_string(i) + ".png")));
        CHECK(fs::exists(out / "s1hat" / ("img" + std::to_string(i) + ".png")));
        CHECK(fs::exists(out / "s2hat" / ("img" + std::to_string(i) + ".png")));
    }

    const fs::path prefix = dir.path() / "report";
    const int erc = run("eval --pred-dir " + out.string() + " --gt-dir " +
                        (dir.path() / "gt").string() + " --out-prefix " + prefix.string());
    CHECK(erc == 0);
    for (const char* suffix : {"_summary.csv", "_pr.csv", "_roc.csv", "_per_image.csv"})
        CHECK(fs::exists(dir.path() / ("report" + std::string(suffix))));
}

TEST_CASE("eval with predictions equal to ground truth is perfect") {
    TempDir dir("salmap-eval-cli");
    fs::create_directories(dir.path() / "gt");
    SaliencyMap m(8, 8);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) m.at(x, y) = x < 4 ? 1.f : 0.f;
    save_saliency(m, dir.path() / "gt" / "a.png");

    const fs::path prefix = dir.path() / "r";
    const int rc = run("eval --pred-dir " + (dir.path() / "gt").string() + " --gt-dir " +
                       (dir.path() / "gt").string() + " --out-prefix " + prefix.string());
    CHECK(rc == 0);
    const std::string summary = read_file(dir.path() / "r_summary.csv");
    CHECK(summary.find("mae,0.000000") != std::string::npos);
    CHECK(summary.find("f_measure,1.000000") != std::string::npos);
}

TEST_CASE("eval exits 1 and names unmatched ids") {
    TempDir dir("salmap-eval-cli");
    fs::create_directories(dir.path() / "gt");
    fs::create_directories(dir.path() / "pred");
    save_saliency(SaliencyMap(4, 4, 1.f), dir.path() / "gt" / "lonely.png");
    CHECK(run("eval --pred-dir " + (dir.path() / "pred").string() + " --gt-dir " +
              (dir.path() / "gt").string() + " --out-prefix " +
              (dir.path() / "r").string()) == 1);
}

TEST_CASE("dark-target emits one map per frame") {
    TempDir dir("salmap-dark");
    fs::create_directories(dir.path() / "frames");
    for (int i = 0; i < 2; ++i) {
        const auto frame = salmap::testing::sky_blob_frame(96, 72, 30 + 10 * i, 25);
        save_rgb(frame.rgb, dir.path() / "frames" / ("f" + std::to_string(i) + ".png"));
    }
    const fs::path out = dir.path() / "maps";
    const int rc = run("dark-target --frames " + (dir.path() / "frames").string() +
                       " --out-dir " + out.string() + " --k 12 --threads 1");
    CHECK(rc == 0);
    CHECK(fs::exists(out / "f0.png"));
    CHECK(fs::exists(out / "f1.png"));

    SUBCASE("even patch size exits 2") {
        CHECK(run("dark-target --frames " + (dir.path() / "frames").string() +
                  " --out-dir " + out.string() + " --patch 4") == 2);
    }
}

TEST_CASE("montage subcommands round trip") {
    TempDir dir("salmap-montage");
    const auto scene = salmap::testing::disk_scene(48, 36);
    const fs::path rgb = dir.path() / "rgb.png";
    save_rgb(scene.rgb, rgb);
    SaliencyMap sal(48, 36);
    for (std::size_t i = 0; i < sal.pixels(); ++i) sal.data[i] = scene.gt.data[i];
    const fs::path salp = dir.path() / "sal.png";
    save_saliency(sal, salp);

    const fs::path color = dir.path() / "obj_color.png";
    const fs::path alpha = dir.path() / "obj_alpha.png";
    CHECK(run("montage segment --rgb " + rgb.string() + " --saliency " + salp.string() +
              " --out-color " + color.string() + " --out-alpha " + alpha.string()) == 0);
    REQUIRE(fs::exists(color));
    REQUIRE(fs::exists(alpha));

    CHECK(run("montage recolor --color " + color.string() + " --alpha " + alpha.string() +
              " --permute bgr --gains 1,1,1 --out-color " +
              (dir.path() / "re_color.png").string() + " --out-alpha " +
              (dir.path() / "re_alpha.png").string()) == 0);

    SUBCASE("invalid gains exit 2") {
        CHECK(run("montage recolor --color " + color.string() + " --alpha " +
                  alpha.string() + " --gains 3,1,1 --out-color x.png --out-alpha y.png") ==
              2);
    }

    CHECK(run("montage resize --in " + rgb.string() + " --out " +
              (dir.path() / "small.png").string() + " --width 24 --height 18") == 0);
    const RgbImage small = load_rgb(dir.path() / "small.png");
    CHECK(small.width == 24);
    CHECK(small.height == 18);

    CHECK(run("montage composite --bg " + rgb.string() + " --color " + color.string() +
              " --alpha " + alpha.string() + " --x 0 --y 0 --out " +
              (dir.path() / "comp.png").string()) == 0);
    CHECK(fs::exists(dir.path() / "comp.png"));
}

TEST_CASE("config file supplies defaults, flags win") {
    SceneFiles f;
    const fs::path cfg = f.dir.path() / "salmap.cfg";
    {
        std::ofstream c(cfg);
        c << "[detect]\nk=8\nthreads=1\nseed=7\n";
    }
    const fs::path a = f.dir.path() / "cfg_a.png";
    const fs::path b = f.dir.path() / "cfg_b.png";
    const std::string base = "detect --rgb " + f.rgb.string() + " --depth " +
                             f.depth.string() + " --out ";
    REQUIRE(run(base + a.string() + " --config " + cfg.string()) == 0);
    REQUIRE(run(base + b.string() + " --k 8 --threads 1 --seed 7") == 0);
    CHECK(read_file(a) == read_file(b));

    // flags win: an invalid configured value is overridden by a valid flag
    const fs::path bad = f.dir.path() / "bad.cfg";
    {
        std::ofstream c(bad);
        c << "[detect]\nk=8\nsigma2=0\n";
    }
    const fs::path out_c = f.dir.path() / "cfg_c.png";
    CHECK(run(base + out_c.string() + " --config " + bad.string()) == 2);
    CHECK(run(base + out_c.string() + " --config " + bad.string() + " --sigma2 0.4") == 0);
}

TEST_CASE("SALMAP_CONFIG names a default config file") {
    SceneFiles f;
    const fs::path cfg = f.dir.path() / "env.cfg";
    {
        std::ofstream c(cfg);
        c << "[detect]\nk=8\nthreads=1\n";
    }
    const fs::path out = f.dir.path() / "env_out.png";
    const std::string cmd = "SALMAP_CONFIG=" + cfg.string() + " " + std::string(SALMAP_BIN) +
                            " detect --rgb " + f.rgb.string() + " --depth " +
                            f.depth.string() + " --out " + out.string() +
                            " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(fs::exists(out));
}
