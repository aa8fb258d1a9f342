#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <spdlog/spdlog.h>

int main(int argc, char** argv)
{
    // Expected warnings from negative-path tests would drown the report.
    spdlog::set_level(spdlog::level::err);
    return doctest::Context(argc, argv).run();
}
