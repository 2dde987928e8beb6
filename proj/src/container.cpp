#include "amrlab/container.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace amrlab {

namespace {

std::uint32_t crc32(const std::uint8_t *data, std::size_t n) {
    static std::array<std::uint32_t, 256> table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k)
                c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t c = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < n; ++i)
        c = table[(c ^ data[i]) & 0xFFu] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

void put_f64_le(std::vector<std::uint8_t> &out, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    for (int i = 0; i < 8; ++i) out.push_back(std::uint8_t(u >> (8 * i)));
}

double get_f64_le(const std::uint8_t *p) {
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= std::uint64_t(p[i]) << (8 * i);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

} // namespace

void write_container(const AMRDataset &ds, const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);

    std::vector<std::uint8_t> blob;
    nlohmann::json manifest;
    manifest["version"] = 1;
    manifest["coarse_dims"] = {ds.coarse_dims.x, ds.coarse_dims.y, ds.coarse_dims.z};
    manifest["refinement_ratio"] = ds.refinement_ratio;
    manifest["levels"] = nlohmann::json::array();

    for (const AMRLevel &lev : ds.levels) {
        nlohmann::json jl;
        jl["patches"] = nlohmann::json::array();
        for (const Patch &p : lev.patches) {
            // payloads are whole multiples of 8 bytes, so appending keeps
            // every offset 8-byte aligned
            std::uint64_t off = blob.size();
            for (double v : p.data) put_f64_le(blob, v);
            jl["patches"].push_back({{"lo", {p.box.lo.x, p.box.lo.y, p.box.lo.z}},
                                     {"hi", {p.box.hi.x, p.box.hi.y, p.box.hi.z}},
                                     {"offset", off}});
        }
        manifest["levels"].push_back(std::move(jl));
    }
    manifest["data_crc32"] = crc32(blob.data(), blob.size());

    {
        std::ofstream f(dir / "data.bin", std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("write_container: cannot open data.bin");
        f.write(reinterpret_cast<const char *>(blob.data()),
                std::streamsize(blob.size()));
    }
    {
        std::ofstream f(dir / "manifest.json", std::ios::trunc);
        if (!f) throw std::runtime_error("write_container: cannot open manifest.json");
        f << manifest.dump(2) << "\n";
    }
}

AMRDataset read_container(const std::filesystem::path &dir) {
    std::ifstream mf(dir / "manifest.json");
    if (!mf) throw std::runtime_error("read_container: missing manifest.json");
    nlohmann::json manifest;
    try {
        mf >> manifest;
    } catch (const nlohmann::json::exception &e) {
        throw std::runtime_error(std::string("read_container: malformed manifest: ") +
                                 e.what());
    }

    std::ifstream df(dir / "data.bin", std::ios::binary);
    if (!df) throw std::runtime_error("read_container: missing data.bin");
    std::vector<std::uint8_t> blob((std::istreambuf_iterator<char>(df)),
                                   std::istreambuf_iterator<char>());

    if (!manifest.contains("version") || manifest["version"] != 1)
        throw std::runtime_error("read_container: unsupported container version");
    if (manifest.contains("data_crc32") &&
        manifest["data_crc32"].get<std::uint32_t>() != crc32(blob.data(), blob.size()))
        throw std::runtime_error("read_container: checksum mismatch");

    AMRDataset ds;
    auto cd = manifest.at("coarse_dims");
    ds.coarse_dims = {cd.at(0).get<int>(), cd.at(1).get<int>(), cd.at(2).get<int>()};
    ds.refinement_ratio = manifest.at("refinement_ratio").get<int>();
    const auto &levels = manifest.at("levels");
    ds.num_levels = int(levels.size());

    for (int l = 0; l < ds.num_levels; ++l) {
        AMRLevel lev;
        lev.level_index = l;
        lev.cell_size = std::ldexp(1.0, -l);
        for (const auto &jp : levels.at(std::size_t(l)).at("patches")) {
            Patch p;
            p.box.lo = {jp.at("lo").at(0).get<int>(), jp.at("lo").at(1).get<int>(),
                        jp.at("lo").at(2).get<int>()};
            p.box.hi = {jp.at("hi").at(0).get<int>(), jp.at("hi").at(1).get<int>(),
                        jp.at("hi").at(2).get<int>()};
            if (!p.box.valid())
                throw std::runtime_error("read_container: malformed patch box");
            std::uint64_t off = jp.at("offset").get<std::uint64_t>();
            std::uint64_t bytes = std::uint64_t(p.box.volume()) * 8;
            if (off % 8 != 0)
                throw std::runtime_error("read_container: misaligned patch offset");
            if (off + bytes > blob.size())
                throw std::runtime_error("read_container: truncated data.bin");
            p.data.resize(std::size_t(p.box.volume()));
            for (std::size_t i = 0; i < p.data.size(); ++i)
                p.data[i] = get_f64_le(blob.data() + off + 8 * i);
            lev.patches.push_back(std::move(p));
        }
        ds.levels.push_back(std::move(lev));
    }
    return ds;
}

} // namespace amrlab
