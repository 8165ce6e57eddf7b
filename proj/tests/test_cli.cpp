// Copyright 2026 The lazypca Authors
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

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Fresh scratch directory per test case.
class Scratch {
 public:
  explicit Scratch(const std::string& name) : dir_(fs::current_path() / ("cli_" + name)) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  std::string operator/(const std::string& file) const { return (dir_ / file).string(); }

  Run run(const std::string& args) const {
    const fs::path out = dir_ / ".stdout";
    const fs::path err = dir_ / ".stderr";
    const std::string command = std::string(LAZYPCA_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(command.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

 private:
  fs::path dir_;
};

json read_json(const std::string& path) { return json::parse(slurp(path)); }

// Small pipeline: 32x32 original, noisy copy, both with sidecars.
void make_pair(const Scratch& s, int levels = 5) {
  REQUIRE(s.run("generate --size 32 --levels " + std::to_string(levels) + " --seed 3 -o " + s / "x.pgm").code == 0);
  REQUIRE(s.run("degrade -i " + s / "x.pgm" + " -o " + s / "g.pgm" + " --sigma 0.25 --seed 103").code == 0);
}

}  // namespace

TEST_CASE("generate") {
  const Scratch s("generate");
  REQUIRE(s.run("generate --seed 1 -o " + s / "a.pgm").code == 0);
  REQUIRE(s.run("generate --seed 1 -o " + s / "b.pgm").code == 0);
  CHECK(slurp(s / "a.pgm") == slurp(s / "b.pgm"));
  CHECK(slurp(s / "a.pgm.json") == slurp(s / "b.pgm.json"));
  CHECK(slurp(s / "a.pgm").rfind("P5\n64 64\n4\n", 0) == 0);

  REQUIRE(s.run("generate --levels 5 --size 256 --steps 2 -o " + s / "big.pgm").code == 0);
  CHECK(slurp(s / "big.pgm").rfind("P5\n256 256\n4\n", 0) == 0);

  const json side = read_json(s / "a.pgm.json");
  CHECK(side["format"] == "lazypca-sidecar/1");
  CHECK(side["width"] == 64);
  CHECK(side["levels"] == 5);
  CHECK(side["seed"] == 1);
  CHECK(side["hash"].get<std::string>().size() == 16);
  CHECK(side["lineage"].empty());
  CHECK(side["provenance"]["schedule"]["beta0"] == 0.4);
  CHECK(side["provenance"]["schedule"]["steps"] == 400);

  CHECK(s.run("generate --levels 1 -o " + s / "c.pgm").code == 2);
  CHECK(s.run("generate --size 0 -o " + s / "c.pgm").code == 2);
  CHECK(s.run("generate").code == 2);
  CHECK(s.run("generate -o /nonexistent/dir/c.pgm").code == 3);
  CHECK(s.run("generate --bogus 1 -o " + s / "c.pgm").code == 2);
  CHECK_FALSE(fs::exists(s / "c.pgm"));

  SUBCASE("config file with flag overrides") {
    std::ofstream(s / "gen.json") << R"({"size": 16, "levels": 3, "seed": 9, "steps": 5})";
    REQUIRE(s.run("generate -c " + s / "gen.json" + " --levels 4 -o " + s / "cfg.pgm").code == 0);
    const json c = read_json(s / "cfg.pgm.json");
    CHECK(c["width"] == 16);
    CHECK(c["levels"] == 4);
    CHECK(c["seed"] == 9);
    std::ofstream(s / "bad.json") << R"({"size": 16, "colour": "red"})";
    const Run bad = s.run("generate -c " + s / "bad.json" + " -o " + s / "c.pgm");
    CHECK(bad.code == 2);
    CHECK(bad.err.find("colour") != std::string::npos);
    std::ofstream(s / "broken.json") << "{";
    CHECK(s.run("generate -c " + s / "broken.json" + " -o " + s / "c.pgm").code == 2);
    CHECK(s.run("generate -c " + s / "missing.json" + " -o " + s / "c.pgm").code == 3);
  }
}

TEST_CASE("degrade") {
  const Scratch s("degrade");
  make_pair(s);
  const std::string g = slurp(s / "g.pgm");
  const std::size_t header = std::string("P5\n32 32\n4\n").size();
  REQUIRE(g.size() == header + 32 * 32);
  for (std::size_t i = header; i < g.size(); ++i) CHECK(static_cast<unsigned char>(g[i]) <= 4);

  REQUIRE(s.run("degrade -i " + s / "x.pgm" + " -o " + s / "g2.pgm" + " --sigma 0.25 --seed 103 --threads 3").code == 0);
  CHECK(slurp(s / "g2.pgm") == g);

  const json side = read_json(s / "g.pgm.json");
  CHECK(side["sigma"].get<double>() == 0.25);
  CHECK(side["seed"] == 103);
  const json parent = read_json(s / "x.pgm.json");
  REQUIRE(side["lineage"].size() == 1);
  CHECK(side["lineage"][0] == parent["hash"]);
  CHECK(side["provenance"]["input_hash"] == parent["hash"]);

  REQUIRE(s.run("degrade -i " + s / "x.pgm" + " -o " + s / "odd.pgm" + " --sigma 0.123456789012345678").code == 0);
  CHECK(read_json(s / "odd.pgm.json")["sigma"].get<double>() == 0.123456789012345678);

  CHECK(s.run("degrade -i " + s / "missing.pgm" + " -o " + s / "o.pgm").code == 3);
  CHECK(s.run("degrade -i " + s / "x.pgm" + " -o " + s / "o.pgm --sigma 0").code == 2);
  std::ofstream(s / "junk.pgm") << "P2\n1 1\n1\n0\n";
  CHECK(s.run("degrade -i " + s / "junk.pgm" + " -o " + s / "o.pgm").code == 3);
}

TEST_CASE("denoise") {
  const Scratch s("denoise");
  make_pair(s);
  const std::string in = " -i " + s / "g.pgm";

  SUBCASE("zero steps returns the input") {
    REQUIRE(s.run("denoise" + in + " -o " + s / "r.pgm --steps 0").code == 0);
    CHECK(slurp(s / "r.pgm") == slurp(s / "g.pgm"));
  }

  SUBCASE("gibbs ignores extra threads with a warning") {
    const Run one = s.run("denoise" + in + " -o " + s / "r1.pgm --steps 30 --threads 1");
    const Run many = s.run("denoise" + in + " -o " + s / "r8.pgm --steps 30 --threads 8");
    REQUIRE(one.code == 0);
    REQUIRE(many.code == 0);
    CHECK(one.err.find("sequential") == std::string::npos);
    CHECK(many.err.find("sequential") != std::string::npos);
    CHECK(slurp(s / "r1.pgm") == slurp(s / "r8.pgm"));
  }

  SUBCASE("pca is byte-identical across thread counts") {
    for (int t : {1, 2, 8})
      REQUIRE(s.run("denoise" + in + " --method pca --steps 30 --seed 5 --threads " + std::to_string(t) + " -o " +
                    s / ("p" + std::to_string(t) + ".pgm"))
                  .code == 0);
    CHECK(slurp(s / "p1.pgm") == slurp(s / "p2.pgm"));
    CHECK(slurp(s / "p1.pgm") == slurp(s / "p8.pgm"));
  }

  SUBCASE("sidecar, trace and checkpoints") {
    REQUIRE(s.run("denoise" + in + " --method pca --steps 20 --beta-period 5 --trace " + s / "t.csv" +
                  " --checkpoint-every 10 --checkpoint-dir " + s / "cp" + " -o " + s / "r.pgm")
                .code == 0);
    const json side = read_json(s / "r.pgm.json");
    const json noisy = read_json(s / "g.pgm.json");
    const json original = read_json(s / "x.pgm.json");
    REQUIRE(side["lineage"].size() == 2);
    CHECK(side["lineage"][0] == noisy["hash"]);
    CHECK(side["lineage"][1] == original["hash"]);
    const json& prov = side["provenance"];
    CHECK(prov["method"] == "pca");
    CHECK(prov["q"] == 0.51);
    CHECK(prov["kernel"] == "consistent");
    CHECK(prov["sigma"] == 0.25);
    CHECK(prov["initial_state"] == "observed");
    CHECK(prov["schedule"]["beta0"] == 1.25);

    std::istringstream csv(slurp(s / "t.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "step,beta,changed_sites,beta_Hg");
    int rows = 0;
    while (std::getline(csv, line)) {
      if (rows == 5) CHECK(line.rfind("5,1.5,", 0) == 0);
      ++rows;
    }
    CHECK(rows == 20);
    CHECK(fs::exists(s / "cp/step_000010.pgm"));
    CHECK(fs::exists(s / "cp/step_000020.pgm"));
    CHECK(slurp(s / "cp/step_000020.pgm") == slurp(s / "r.pgm"));
  }

  SUBCASE("sigma defaults to the noisy sidecar") {
    REQUIRE(s.run("degrade -i " + s / "x.pgm" + " -o " + s / "g10.pgm --sigma 0.1 --seed 4").code == 0);
    REQUIRE(s.run("denoise -i " + s / "g10.pgm" + " -o " + s / "r10.pgm --steps 1").code == 0);
    CHECK(read_json(s / "r10.pgm.json")["provenance"]["sigma"] == 0.1);
    REQUIRE(s.run("denoise -i " + s / "g10.pgm" + " -o " + s / "r11.pgm --steps 1 --sigma 0.3").code == 0);
    CHECK(read_json(s / "r11.pgm.json")["provenance"]["sigma"] == 0.3);
  }

  SUBCASE("configuration errors") {
    std::ofstream(s / "noq.json") << R"({"method": "pca", "q": null})";
    CHECK(s.run("denoise -c " + s / "noq.json" + in + " -o " + s / "o.pgm").code == 2);
    CHECK(s.run("denoise" + in + " -o " + s / "o.pgm --method metropolis").code == 2);
    CHECK(s.run("denoise" + in + " -o " + s / "o.pgm --method pca --p 1").code == 2);
    CHECK(s.run("denoise" + in + " -o " + s / "o.pgm --method pca --q -1").code == 2);
    CHECK(s.run("denoise" + in + " -o " + s / "o.pgm --kernel half").code == 2);
    CHECK(s.run("denoise" + in + " -o " + s / "o.pgm --beta-period 0").code == 2);
    CHECK(s.run("denoise" + in + " -o " + s / "o.pgm --beta0 0").code == 2);
    CHECK(s.run("denoise -i " + s / "none.pgm" + " -o " + s / "o.pgm").code == 3);
    CHECK_FALSE(fs::exists(s / "o.pgm"));
  }

  SUBCASE("full kernel is selectable") {
    REQUIRE(s.run("denoise" + in + " --method pca --kernel full --steps 3 -o " + s / "f.pgm").code == 0);
    CHECK(read_json(s / "f.pgm.json")["provenance"]["kernel"] == "full");
  }
}

TEST_CASE("evaluate") {
  const Scratch s("evaluate");
  make_pair(s);
  REQUIRE(s.run("denoise -i " + s / "g.pgm" + " -o " + s / "r.pgm --steps 40").code == 0);

  SUBCASE("identical images") {
    const Run r = s.run("evaluate --original " + s / "x.pgm" + " --restored " + s / "x.pgm" + " --json " + s / "m.json");
    REQUIRE(r.code == 0);
    const json m = read_json(s / "m.json");
    CHECK(m["restored"]["psnr"] == "inf");
    CHECK(m["restored"]["ssim"] == 1.0);
    CHECK(m["restored"]["mse"] == 0.0);
    CHECK(r.out.find("inf") != std::string::npos);
  }

  SUBCASE("table and JSON report") {
    const Run r = s.run("evaluate --original " + s / "x.pgm" + " --restored " + s / "r.pgm" + " --noisy " + s / "g.pgm" +
                        " --image-id mrf_n32_l5_i003 --json " + s / "m.json");
    REQUIRE(r.code == 0);
    std::istringstream table(r.out);
    std::string header, noisy_row, restored_row;
    std::getline(table, header);
    std::getline(table, noisy_row);
    std::getline(table, restored_row);
    std::istringstream cols(header);
    std::string c[7];
    cols >> c[0] >> c[1] >> c[2] >> c[3] >> c[4] >> c[5] >> c[6] ;
    CHECK(c[0] == "image");
    CHECK(c[1] == "id");
    CHECK(c[2] == "N");
    CHECK(c[3] == "sigma");
    CHECK(c[4] == "l");
    CHECK(c[5] == "algo");
    CHECK(c[6] == "SSIM");
    CHECK(header.find("PSNR") > header.find("SSIM"));
    CHECK(restored_row.rfind("mrf_n32_l5_i003", 0) == 0);
    CHECK(restored_row.find(" GS ") != std::string::npos);
    CHECK(restored_row.find("0.25") != std::string::npos);
    CHECK(noisy_row.find("noisy") != std::string::npos);

    const json m = read_json(s / "m.json");
    CHECK(m["levels"] == 5);
    CHECK(m["width"] == 32);
    CHECK(m["algo"] == "GS");
    CHECK(m["sigma"] == 0.25);
    CHECK(m["c1"] == 1e-4);
    CHECK(m["restored"]["psnr"].get<double>() > m["noisy"]["psnr"].get<double>());
  }

  SUBCASE("lineage mismatch") {
    REQUIRE(s.run("generate --size 32 --seed 4 -o " + s / "y.pgm").code == 0);
    const std::string args = "evaluate --original " + s / "y.pgm" + " --restored " + s / "r.pgm";
    const Run refused = s.run(args);
    CHECK(refused.code == 4);
    CHECK(refused.err.find("does not descend") != std::string::npos);
    CHECK(s.run(args + " --force").code == 0);

    // A sidecar that no longer matches its image.
    fs::copy_file(s / "r.pgm", s / "tampered.pgm");
    fs::copy_file(s / "x.pgm.json", s / "tampered.pgm.json");
    CHECK(s.run("evaluate --original " + s / "x.pgm" + " --restored " + s / "tampered.pgm").code == 4);

    // No sidecar: warn and proceed.
    fs::copy_file(s / "r.pgm", s / "bare.pgm");
    const Run bare = s.run("evaluate --original " + s / "x.pgm" + " --restored " + s / "bare.pgm");
    CHECK(bare.code == 0);
    CHECK(bare.err.find("warning") != std::string::npos);
  }

  SUBCASE("mismatched sizes") {
    REQUIRE(s.run("generate --size 16 --seed 4 -o " + s / "small.pgm").code == 0);
    CHECK(s.run("evaluate --force --original " + s / "x.pgm" + " --restored " + s / "small.pgm").code == 2);
  }
}

TEST_CASE("bench") {
  const Scratch s("bench");
  const Run r = s.run("bench --size 48 --steps 2 --threads 1 2 -o " + s / "b.json");
  REQUIRE(r.code == 0);
  const json b = read_json(s / "b.json");
  CHECK(b["width"] == 48);
  CHECK(b["gibbs"]["site_updates_per_step"] == 48 * 48);
  REQUIRE(b["pca"].size() == 2);
  CHECK(b["pca"][0]["threads"] == 1);
  CHECK(b["pca"][0]["site_updates_per_step"] == 48 * 48);
  CHECK(b["pca"][0]["speedup"] == 1.0);
  CHECK(b["pca"][1]["threads"] == 2);
  CHECK(b["pca"][1]["updates_per_second"].get<double>() > 0.0);

  const Run stdout_run = s.run("bench --size 16 --steps 1 --threads 1");
  REQUIRE(stdout_run.code == 0);
  CHECK(json::parse(stdout_run.out)["pca"].size() == 1);
  CHECK(s.run("bench --size 16 --steps 0").code == 2);
}

TEST_CASE("usage errors") {
  const Scratch s("usage");
  CHECK(s.run("").code == 2);
  CHECK(s.run("frobnicate").code == 2);
  CHECK(s.run("--help").code == 0);
  CHECK(s.run("--version").out.find("1.0.0") != std::string::npos);
}
