#include "aleph/unitlog.hpp"

#include <json.hpp>

#include <fstream>

namespace aleph::dag {

Bytes export_units(const LocalView& view) {
    Bytes out;
    for (const Digest& d : view.digests_in_insertion_order()) {
        Bytes enc = canonical_encode(view.unit(d));
        put_u32(out, uint32_t(enc.size()));
        put_bytes(out, enc);
    }
    return out;
}

std::vector<Unit> parse_unit_log(std::span<const uint8_t> bytes) {
    ByteReader r(bytes);
    std::vector<Unit> out;
    while (!r.done()) {
        uint32_t len = r.u32();
        out.push_back(canonical_decode(r.take(len)));
    }
    return out;
}

size_t import_units(LocalView& view, std::span<const uint8_t> bytes) {
    size_t count = 0;
    for (const Unit& u : parse_unit_log(bytes)) {
        InsertResult res = view.insert(u);
        if (res != InsertResult::Inserted && res != InsertResult::Duplicate) break;
        ++count;
    }
    return count;
}

std::string units_debug_jsonl(const LocalView& view) {
    std::string out;
    for (const Digest& d : view.digests_in_insertion_order()) {
        const Unit& u = view.unit(d);
        nlohmann::ordered_json j;
        j["digest"] = d.hex();
        j["creator"] = u.creator;
        nlohmann::ordered_json parents = nlohmann::ordered_json::array();
        for (const Digest& p : u.parents) parents.push_back(p.hex());
        j["parents"] = parents;
        j["level"] = view.level_of(d);
        j["prime"] = view.is_prime(d);
        out += j.dump();
        out += "\n";
    }
    return out;
}

void write_unit_log(const std::filesystem::path& file, const LocalView& view) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write unit log: " + file.string());
    Bytes bytes = export_units(view);
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

std::vector<Unit> read_unit_log(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open unit log: " + file.string());
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_unit_log(bytes);
}

}  // namespace aleph::dag
