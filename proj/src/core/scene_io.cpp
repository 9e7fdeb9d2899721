// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#include "drc/core/scene_io.h"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "drc/core/errors.h"

namespace drc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string &where, const std::string &msg) {
    throw ValidationError(where + ": " + msg);
}

void check_keys(const json &obj, const std::string &where,
                std::initializer_list<const char *> allowed) {
    if (!obj.is_object()) fail(where, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!ok.count(it.key())) fail(where, "unknown key \"" + it.key() + "\"");
}

double get_number(const json &v, const std::string &where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
}

Vec3 get_vec3(const json &v, const std::string &where) {
    if (!v.is_array() || v.size() != 3) fail(where, "expected an array of 3 numbers");
    return {get_number(v[0], where), get_number(v[1], where), get_number(v[2], where)};
}

Rgb get_rgb(const json &v, const std::string &where) {
    const Vec3 c = get_vec3(v, where);
    return {c.x, c.y, c.z};
}

const json &require_key(const json &obj, const char *key, const std::string &where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, std::string("missing key \"") + key + "\"");
    return *it;
}

Camera parse_camera(const json &j) {
    check_keys(j, "camera", {"position", "look_at", "up", "fov", "resolution"});
    Camera c;
    c.position = get_vec3(require_key(j, "position", "camera"), "camera.position");
    c.look_at = get_vec3(require_key(j, "look_at", "camera"), "camera.look_at");
    if (j.contains("up")) c.up = get_vec3(j["up"], "camera.up");
    c.fov = get_number(require_key(j, "fov", "camera"), "camera.fov");
    const json &res = require_key(j, "resolution", "camera");
    if (!res.is_array() || res.size() != 2 || !res[0].is_number_integer() ||
        !res[1].is_number_integer())
        fail("camera.resolution", "expected [width, height] integers");
    c.width = res[0].get<int>();
    c.height = res[1].get<int>();
    return c;
}

MaterialKind parse_kind(const std::string &s, const std::string &where) {
    if (s == "diffuse") return MaterialKind::diffuse;
    if (s == "glossy") return MaterialKind::glossy;
    if (s == "mirror") return MaterialKind::mirror;
    if (s == "transmission") return MaterialKind::transmission;
    fail(where, "unknown material type \"" + s + "\"");
}

const char *kind_name(MaterialKind k) {
    switch (k) {
    case MaterialKind::diffuse: return "diffuse";
    case MaterialKind::glossy: return "glossy";
    case MaterialKind::mirror: return "mirror";
    case MaterialKind::transmission: return "transmission";
    }
    return "diffuse";
}

Material parse_material(const json &j, std::size_t i) {
    const std::string where = "materials[" + std::to_string(i) + "]";
    check_keys(j, where, {"name", "type", "albedo", "roughness", "ior", "emission"});
    Material m;
    const json &name = require_key(j, "name", where);
    if (!name.is_string()) fail(where + ".name", "expected a string");
    m.name = name.get<std::string>();
    if (j.contains("type")) {
        if (!j["type"].is_string()) fail(where + ".type", "expected a string");
        m.kind = parse_kind(j["type"].get<std::string>(), where + ".type");
    }
    if (j.contains("albedo")) m.albedo = get_rgb(j["albedo"], where + ".albedo");
    if (j.contains("roughness")) m.roughness = get_number(j["roughness"], where + ".roughness");
    if (j.contains("ior")) m.ior = get_number(j["ior"], where + ".ior");
    if (j.contains("emission")) m.emission = get_rgb(j["emission"], where + ".emission");
    return m;
}

Shape parse_shape(const json &j, std::size_t i) {
    const std::string where = "shapes[" + std::to_string(i) + "]";
    if (!j.is_object()) fail(where, "expected an object");
    const json &type = require_key(j, "type", where);
    if (!type.is_string()) fail(where + ".type", "expected a string");
    const std::string t = type.get<std::string>();
    Shape s;
    if (t == "sphere") {
        check_keys(j, where, {"type", "material", "center", "radius"});
        SphereShape sp;
        sp.center = get_vec3(require_key(j, "center", where), where + ".center");
        sp.radius = get_number(require_key(j, "radius", where), where + ".radius");
        s.geometry = sp;
    } else if (t == "quad") {
        check_keys(j, where, {"type", "material", "corner", "edge_u", "edge_v"});
        QuadShape q;
        q.corner = get_vec3(require_key(j, "corner", where), where + ".corner");
        q.edge_u = get_vec3(require_key(j, "edge_u", where), where + ".edge_u");
        q.edge_v = get_vec3(require_key(j, "edge_v", where), where + ".edge_v");
        s.geometry = q;
    } else if (t == "mesh") {
        check_keys(j, where, {"type", "material", "vertices", "triangles"});
        MeshShape mesh;
        const json &verts = require_key(j, "vertices", where);
        if (!verts.is_array()) fail(where + ".vertices", "expected an array");
        for (const json &v : verts) mesh.vertices.push_back(get_vec3(v, where + ".vertices"));
        const json &tris = require_key(j, "triangles", where);
        if (!tris.is_array()) fail(where + ".triangles", "expected an array");
        for (const json &tri : tris) {
            if (!tri.is_array() || tri.size() != 3)
                fail(where + ".triangles", "expected index triples");
            std::array<std::uint32_t, 3> idx{};
            for (int k = 0; k < 3; ++k) {
                if (!tri[k].is_number_unsigned())
                    fail(where + ".triangles", "indices must be non-negative integers");
                idx[k] = tri[k].get<std::uint32_t>();
            }
            mesh.triangles.push_back(idx);
        }
        s.geometry = std::move(mesh);
    } else {
        fail(where + ".type", "unknown shape type \"" + t + "\"");
    }
    const json &mat = require_key(j, "material", where);
    if (!mat.is_string()) fail(where + ".material", "expected a string");
    s.material = mat.get<std::string>();
    return s;
}

json vec_json(const Vec3 &v) { return json::array({v.x, v.y, v.z}); }
json rgb_json(const Rgb &c) { return json::array({c.r, c.g, c.b}); }

}  // namespace

SceneDescription parse_scene_description(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("scene syntax error: ") + e.what(), e.byte);
    }
    check_keys(root, "scene",
               {"camera", "materials", "shapes", "point_lights", "global_up", "environment"});
    SceneDescription d;
    d.camera = parse_camera(require_key(root, "camera", "scene"));
    const json &mats = require_key(root, "materials", "scene");
    if (!mats.is_array()) fail("materials", "expected an array");
    for (std::size_t i = 0; i < mats.size(); ++i) d.materials.push_back(parse_material(mats[i], i));
    const json &shapes = require_key(root, "shapes", "scene");
    if (!shapes.is_array()) fail("shapes", "expected an array");
    for (std::size_t i = 0; i < shapes.size(); ++i) d.shapes.push_back(parse_shape(shapes[i], i));
    if (root.contains("point_lights")) {
        const json &pls = root["point_lights"];
        if (!pls.is_array()) fail("point_lights", "expected an array");
        for (std::size_t i = 0; i < pls.size(); ++i) {
            const std::string where = "point_lights[" + std::to_string(i) + "]";
            check_keys(pls[i], where, {"position", "intensity"});
            PointLight l;
            l.position = get_vec3(require_key(pls[i], "position", where), where + ".position");
            l.intensity = get_rgb(require_key(pls[i], "intensity", where), where + ".intensity");
            d.point_lights.push_back(l);
        }
    }
    if (root.contains("global_up")) d.global_up = get_vec3(root["global_up"], "global_up");
    if (root.contains("environment")) d.environment = get_rgb(root["environment"], "environment");
    return d;
}

Scene parse_scene(std::string_view text) { return Scene(parse_scene_description(text)); }

Scene load_scene(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scene file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scene(ss.str());
}

std::string serialize_scene(const SceneDescription &d) {
    json root;
    root["camera"] = {{"position", vec_json(d.camera.position)},
                      {"look_at", vec_json(d.camera.look_at)},
                      {"up", vec_json(d.camera.up)},
                      {"fov", d.camera.fov},
                      {"resolution", json::array({d.camera.width, d.camera.height})}};
    json mats = json::array();
    for (const Material &m : d.materials)
        mats.push_back({{"name", m.name},
                        {"type", kind_name(m.kind)},
                        {"albedo", rgb_json(m.albedo)},
                        {"roughness", m.roughness},
                        {"ior", m.ior},
                        {"emission", rgb_json(m.emission)}});
    root["materials"] = mats;
    json shapes = json::array();
    for (const Shape &s : d.shapes) {
        json js;
        if (const auto *sp = std::get_if<SphereShape>(&s.geometry)) {
            js = {{"type", "sphere"}, {"center", vec_json(sp->center)}, {"radius", sp->radius}};
        } else if (const auto *q = std::get_if<QuadShape>(&s.geometry)) {
            js = {{"type", "quad"},
                  {"corner", vec_json(q->corner)},
                  {"edge_u", vec_json(q->edge_u)},
                  {"edge_v", vec_json(q->edge_v)}};
        } else {
            const auto &mesh = std::get<MeshShape>(s.geometry);
            json verts = json::array();
            for (const Vec3 &v : mesh.vertices) verts.push_back(vec_json(v));
            json tris = json::array();
            for (const auto &t : mesh.triangles) tris.push_back(json::array({t[0], t[1], t[2]}));
            js = {{"type", "mesh"}, {"vertices", verts}, {"triangles", tris}};
        }
        js["material"] = s.material;
        shapes.push_back(js);
    }
    root["shapes"] = shapes;
    json pls = json::array();
    for (const PointLight &l : d.point_lights)
        pls.push_back({{"position", vec_json(l.position)}, {"intensity", rgb_json(l.intensity)}});
    root["point_lights"] = pls;
    root["global_up"] = vec_json(d.global_up);
    if (!d.environment.is_black()) root["environment"] = rgb_json(d.environment);
    return root.dump(2) + "\n";
}

}  // namespace drc
