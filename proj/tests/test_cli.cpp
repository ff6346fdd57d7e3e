#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "dtcwtmark/y4m.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
};

class Cli : public ::testing::Test {
protected:
    static void SetUpTestSuite()
    {
        dir_ = fs::temp_directory_path() / ("dtcwtmark_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
        const Outcome r = run("synth --output " + path("cover.y4m") + " --pattern blocks --seed 7 --frames 300");
        ASSERT_EQ(r.code, 0) << r.out;
    }

    static void TearDownTestSuite() { fs::remove_all(dir_); }

    static std::string path(const std::string& name) { return (dir_ / name).string(); }

    // Runs the tool with stdout and stderr merged.
    static Outcome run(const std::string& args)
    {
        const std::string log = path("last.log");
        const std::string cmd = std::string("\"") + DTCWTMARK_CLI_PATH + "\" " + args + " > \"" + log + "\" 2>&1";
        const int status = std::system(cmd.c_str());
        Outcome r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        std::ifstream in(log);
        std::ostringstream s;
        s << in.rdbuf();
        r.out = s.str();
        return r;
    }

    static inline fs::path dir_;
};

double psnr_in(const std::string& out)
{
    std::smatch m;
    if (!std::regex_search(out, m, std::regex(R"(psnr\s+([0-9.]+|inf))"))) return -1.0;
    return m[1] == "inf" ? 1e9 : std::stod(m[1]);
}

}  // namespace

TEST_F(Cli, EmbedWithSeedReportsPsnr)
{
    const Outcome r = run("embed -i " + path("cover.y4m") + " -o " + path("seed.y4m") + " --seed 42 --report " +
                      path("embed.json"));
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_GE(psnr_in(r.out), 36.0) << r.out;
    EXPECT_NE(r.out.find("groups   6"), std::string::npos) << r.out;
    EXPECT_TRUE(fs::exists(path("embed.json")));
}

TEST_F(Cli, EmbedThenExtractRecoversPayload)
{
    Outcome r = run("embed -i " + path("cover.y4m") + " -o " + path("marked.y4m") + " --payload 101010");
    ASSERT_EQ(r.code, 0) << r.out;
    r = run("extract -i " + path("marked.y4m") + " --payload 101010");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("detected 101010"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("nc       1.0000"), std::string::npos) << r.out;
}

TEST_F(Cli, WrongPayloadLengthNamesGroupCount)
{
    const Outcome r = run("embed -i " + path("cover.y4m") + " -o " + path("bad.y4m") + " --payload 10101");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("exactly 6"), std::string::npos) << r.out;
}

TEST_F(Cli, AttackChangesFrameRate)
{
    const Outcome r = run("attack -i " + path("cover.y4m") + " -o " + path("fps15.y4m") + " -a framerate:fps=15");
    ASSERT_EQ(r.code, 0) << r.out;
    std::ifstream in(path("fps15.y4m"), std::ios::binary);
    const auto v = dtcwtmark::y4m::read_y4m(in);
    EXPECT_DOUBLE_EQ(v.fps, 15.0);
    EXPECT_EQ(v.frame_count(), 150u);
}

TEST_F(Cli, CombinedAttackChain)
{
    const Outcome r = run("attack -i " + path("cover.y4m") + " -o " + path("combo.y4m") +
                      " -a rotate_crop:angle=10+framerate:fps=15");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("300 -> 150"), std::string::npos) << r.out;
}

TEST_F(Cli, BadAttackListsGrammar)
{
    const Outcome r = run("attack -i " + path("cover.y4m") + " -o " + path("x.y4m") + " -a framerate:fps=0");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("grammar"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("rotate_crop:angle"), std::string::npos) << r.out;
}

TEST_F(Cli, PsnrAndNcSubcommands)
{
    Outcome r = run("psnr -r " + path("cover.y4m") + " -i " + path("cover.y4m"));
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("psnr inf"), std::string::npos) << r.out;
    r = run("nc -r 1111 -d 11?0");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("nc 0.2500 ber 0.5000 erasures 1"), std::string::npos) << r.out;
}

TEST_F(Cli, RawInputNeedsGeometry)
{
    Outcome r = run("synth -o " + path("raw.yuv") + " --frames 12 --width 32 --height 32");
    ASSERT_EQ(r.code, 0) << r.out;
    r = run("extract -i " + path("raw.yuv"));
    EXPECT_EQ(r.code, 1) << r.out;
    r = run("extract -i " + path("raw.yuv") + " --width 32 --height 32 --fps 12");
    EXPECT_EQ(r.code, 0) << r.out;
}

TEST_F(Cli, ExitCodes)
{
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
    EXPECT_EQ(run("embed -i " + path("cover.y4m")).code, 1);
    EXPECT_EQ(run("extract -i " + path("missing.y4m")).code, 2);
    {
        std::ofstream bad(path("bad.y4m"), std::ios::binary);
        bad << "YUV4MPEG2 W16 H16 F30:1 C422\n";
    }
    EXPECT_EQ(run("extract -i " + path("bad.y4m")).code, 2);
    // Too small for three transform levels.
    Outcome r = run("synth -o " + path("tiny.y4m") + " --frames 6 --width 4 --height 4");
    ASSERT_EQ(r.code, 0) << r.out;
    r = run("extract -i " + path("tiny.y4m"));
    EXPECT_EQ(r.code, 3) << r.out;
    EXPECT_EQ(run("embed -i " + path("cover.y4m") + " -o " + path("k.y4m") + " --seed 1 --strength 1.5").code, 3);
}

TEST_F(Cli, BenchIsDeterministic)
{
    const std::string args = " --videos 2 --frames 30 --width 48 --height 48 -a none -a quantize:step=8 --report ";
    ASSERT_EQ(run("bench --seed 3" + args + path("a.csv")).code, 0);
    ASSERT_EQ(run("bench --seed 3 --serial" + args + path("b.csv")).code, 0);
    std::ifstream a(path("a.csv")), b(path("b.csv"));
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_EQ(sa.str().rfind("video,attack,nc,ber,psnr_embed", 0), 0u);
}
