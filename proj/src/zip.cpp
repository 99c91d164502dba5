#include "varex/zip.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "varex/errors.hpp"

namespace varex {

namespace {

void put16(std::string &out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put32(std::string &out, std::uint32_t v) {
    put16(out, static_cast<std::uint16_t>(v & 0xffff));
    put16(out, static_cast<std::uint16_t>(v >> 16));
}

std::uint16_t get16(const std::string &s, std::size_t off) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(s[off]) |
                                      (static_cast<unsigned char>(s[off + 1]) << 8));
}

std::uint32_t get32(const std::string &s, std::size_t off) {
    return static_cast<std::uint32_t>(get16(s, off)) |
           (static_cast<std::uint32_t>(get16(s, off + 2)) << 16);
}

std::uint32_t crc(const std::string &data) {
    return static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef *>(data.data()), static_cast<uInt>(data.size())));
}

// fixed DOS timestamp (1980-01-01) keeps archives reproducible
constexpr std::uint16_t kDosTime = 0;
constexpr std::uint16_t kDosDate = 0x0021;

} // namespace

void ZipWriter::add(const std::string &name, const std::string &data) {
    entries_.emplace_back(name, data);
}

void ZipWriter::write(const std::filesystem::path &path) const {
    std::string out;
    std::string central;
    std::uint16_t count = 0;
    for (const auto &[name, data] : entries_) {
        const std::uint32_t offset = static_cast<std::uint32_t>(out.size());
        const std::uint32_t checksum = crc(data);
        const auto size = static_cast<std::uint32_t>(data.size());
        const auto name_len = static_cast<std::uint16_t>(name.size());

        put32(out, 0x04034b50); // local file header
        put16(out, 20);
        put16(out, 0);
        put16(out, 0); // stored
        put16(out, kDosTime);
        put16(out, kDosDate);
        put32(out, checksum);
        put32(out, size);
        put32(out, size);
        put16(out, name_len);
        put16(out, 0);
        out += name;
        out += data;

        put32(central, 0x02014b50); // central directory header
        put16(central, 20);
        put16(central, 20);
        put16(central, 0);
        put16(central, 0);
        put16(central, kDosTime);
        put16(central, kDosDate);
        put32(central, checksum);
        put32(central, size);
        put32(central, size);
        put16(central, name_len);
        put16(central, 0);
        put16(central, 0);
        put16(central, 0);
        put16(central, 0);
        put32(central, 0);
        put32(central, offset);
        central += name;
        ++count;
    }
    const std::uint32_t central_offset = static_cast<std::uint32_t>(out.size());
    out += central;
    put32(out, 0x06054b50); // end of central directory
    put16(out, 0);
    put16(out, 0);
    put16(out, count);
    put16(out, count);
    put32(out, static_cast<std::uint32_t>(central.size()));
    put32(out, central_offset);
    put16(out, 0);

    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw IoError(path.string());
    file << out;
    if (!file)
        throw IoError(path.string());
}

std::map<std::string, std::string> read_zip(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string data = buf.str();

    // locate end-of-central-directory record
    if (data.size() < 22)
        throw ArchiveIncomplete("end of central directory");
    std::size_t eocd = std::string::npos;
    for (std::size_t i = data.size() - 22; i + 4 <= data.size(); --i) {
        if (get32(data, i) == 0x06054b50) {
            eocd = i;
            break;
        }
        if (i == 0)
            break;
    }
    if (eocd == std::string::npos)
        throw ArchiveIncomplete("end of central directory");

    const std::uint16_t count = get16(data, eocd + 10);
    std::size_t pos = get32(data, eocd + 16);
    std::map<std::string, std::string> entries;
    for (std::uint16_t e = 0; e < count; ++e) {
        if (pos + 46 > data.size() || get32(data, pos) != 0x02014b50)
            throw ArchiveIncomplete("central directory entry");
        const std::uint16_t method = get16(data, pos + 10);
        const std::uint32_t size = get32(data, pos + 24);
        const std::uint16_t name_len = get16(data, pos + 28);
        const std::uint16_t extra_len = get16(data, pos + 30);
        const std::uint16_t comment_len = get16(data, pos + 32);
        const std::uint32_t local_offset = get32(data, pos + 42);
        const std::string name = data.substr(pos + 46, name_len);
        if (method != 0)
            throw ArchiveIncomplete("unsupported compression for " + name);
        // skip past the local header to the payload
        if (local_offset + 30 > data.size())
            throw ArchiveIncomplete(name);
        const std::uint16_t l_name = get16(data, local_offset + 26);
        const std::uint16_t l_extra = get16(data, local_offset + 28);
        const std::size_t payload = local_offset + 30 + l_name + l_extra;
        if (payload + size > data.size())
            throw ArchiveIncomplete(name);
        entries[name] = data.substr(payload, size);
        pos += 46u + name_len + extra_len + comment_len;
    }
    return entries;
}

} // namespace varex
