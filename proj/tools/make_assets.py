#!/usr/bin/env python3
"""Regenerates the bundled experiment corpus, masks and manifest under assets/.

coffee_mug is the CC0 photograph shipped with scikit-image. The other four
scenes are drawn procedurally (the grass texture is also scikit-image CC0
data). Masks are single-channel PNGs, 255 = occluded.

    python3 tools/make_assets.py [--out assets]
"""

import argparse
import json
import pathlib

import numpy as np
from PIL import Image, ImageDraw, ImageFilter
from skimage import data as skdata

SEED = 20240601


def grass_texture(size, tint, rng):
    g = Image.fromarray(skdata.grass()).resize(size, Image.BICUBIC)
    a = np.asarray(g, dtype=np.float32) / 255.0
    a = 0.55 + 0.45 * a
    rgb = np.stack([a * tint[0], a * tint[1], a * tint[2]], axis=-1)
    rgb += rng.normal(0, 4, rgb.shape)
    return Image.fromarray(np.clip(rgb, 0, 255).astype(np.uint8))


def vertical_gradient(size, top, bottom):
    w, h = size
    t = np.linspace(0, 1, h)[:, None, None]
    rgb = (1 - t) * np.array(top) + t * np.array(bottom)
    return Image.fromarray(np.repeat(rgb, w, axis=1).astype(np.uint8))


def add_noise(img, rng, sigma):
    a = np.asarray(img, dtype=np.float32)
    a += rng.normal(0, sigma, a.shape)
    return Image.fromarray(np.clip(a, 0, 255).astype(np.uint8))


def keep_to_mask(size, draw_keep):
    """Masks everything except the regions painted by draw_keep."""
    keep = Image.new("L", size, 0)
    draw_keep(ImageDraw.Draw(keep))
    return Image.fromarray(np.where(np.asarray(keep) > 0, 0, 255).astype(np.uint8), "L")


# golden retriever ---------------------------------------------------------

DOG_HEAD = (330, 70, 450, 190)


def dog_body(d, fill):
    d.ellipse((120, 150, 380, 290), fill=fill)            # torso
    for x in (150, 200, 300, 345):                         # legs
        d.rounded_rectangle((x, 250, x + 32, 345), 12, fill=fill)
    d.polygon([(125, 190), (60, 120), (50, 130), (115, 215)], fill=fill)  # tail
    d.polygon([(320, 160), (360, 130), (400, 170), (360, 230)], fill=fill)  # neck


def dog_head(d, fill):
    d.ellipse(DOG_HEAD, fill=fill)
    d.ellipse((415, 118, 492, 176), fill=fill)             # muzzle
    d.ellipse((320, 85, 360, 175), fill=fill)              # ear


def golden_retriever(rng):
    size = (512, 384)
    img = vertical_gradient(size, (150, 190, 230), (200, 220, 235))
    img.paste(grass_texture((512, 200), (90, 150, 60), rng), (0, 184))
    d = ImageDraw.Draw(img)
    d.ellipse((-40, 120, 200, 230), fill=(70, 110, 60))    # hedge
    d.ellipse((380, 110, 600, 220), fill=(60, 100, 55))

    fur = (205, 150, 70)
    dog_body(d, fur)
    dog_head(d, fur)
    d.ellipse((320, 85, 360, 175), fill=(170, 110, 45))    # darker ear
    d.ellipse((395, 105, 413, 123), fill=(30, 20, 10))     # eye
    d.ellipse((468, 128, 490, 148), fill=(20, 15, 10))     # nose
    d.arc((430, 140, 480, 170), 20, 160, fill=(90, 50, 30), width=3)
    # Fur strands, kept inside the silhouette.
    silhouette = Image.new("L", size, 0)
    sd = ImageDraw.Draw(silhouette)
    dog_body(sd, 255)
    dog_head(sd, 255)
    for _ in range(900):
        x, y = rng.uniform(120, 470), rng.uniform(80, 340)
        if silhouette.getpixel((int(x), int(y))) and silhouette.getpixel((int(x), min(int(y) + 10, 383))):
            shade = int(rng.uniform(-40, 30))
            c = (fur[0] + shade, fur[1] + shade, max(fur[2] + shade, 0))
            d.line((x, y, x + rng.uniform(-6, 6), y + rng.uniform(4, 10)), fill=c, width=2)
    img = add_noise(img.filter(ImageFilter.GaussianBlur(0.8)), rng, 3)

    background = keep_to_mask(size, lambda k: (dog_body(k, 255), dog_head(k, 255)))
    face = keep_to_mask(size, lambda k: dog_head(k, 255))
    return img, [("background except dog", background), ("all except face", face)]


# soccer ball --------------------------------------------------------------

BALL = (300, 250, 72)


def leg(d, fill):
    d.line((70, 0, 150, 180), fill=fill, width=60)
    d.line((150, 180, 205, 265), fill=fill, width=52)
    d.ellipse((170, 230, 250, 300), fill=fill)             # boot


def soccer_ball(rng):
    size = (512, 384)
    img = grass_texture(size, (70, 160, 70), rng)
    d = ImageDraw.Draw(img)
    d.rectangle((0, 0, 511, 60), fill=(120, 120, 130))     # stands
    for x in range(0, 512, 18):
        d.ellipse((x, 10 + (x % 36) // 3, x + 12, 22 + (x % 36) // 3), fill=(200, 60, 60))
    d.line((0, 330, 511, 300), fill=(240, 240, 240), width=6)

    skin = (220, 170, 130)
    d.line((70, 0, 150, 180), fill=(30, 30, 160), width=60)    # shorts/sock
    d.line((150, 180, 205, 265), fill=skin, width=52)
    d.ellipse((170, 230, 250, 300), fill=(20, 20, 20))         # boot

    cx, cy, r = BALL
    d.ellipse((cx - r, cy - r, cx + r, cy + r), fill=(245, 245, 245), outline=(60, 60, 60), width=2)
    pent = lambda x, y, s: [(x + s * np.cos(a), y + s * np.sin(a))
                            for a in np.linspace(-np.pi / 2, 1.5 * np.pi, 6)[:-1]]
    d.polygon(pent(cx, cy, 22), fill=(15, 15, 15))
    for k in range(5):
        a = -np.pi / 2 + k * 2 * np.pi / 5
        x, y = cx + 52 * np.cos(a), cy + 52 * np.sin(a)
        d.polygon(pent(x, y, 16), fill=(15, 15, 15))
        d.line((cx + 22 * np.cos(a), cy + 22 * np.sin(a), x, y), fill=(90, 90, 90), width=2)
    img = add_noise(img.filter(ImageFilter.GaussianBlur(0.7)), rng, 3)

    ball = lambda k: k.ellipse((cx - r - 3, cy - r - 3, cx + r + 3, cy + r + 3), fill=255)
    first = keep_to_mask(size, ball)
    second = keep_to_mask(size, lambda k: (ball(k), leg(k, 255)))
    return img, [("background except ball", first), ("all except ball and leg", second)]


# coffee mug ---------------------------------------------------------------

MUG_RIM = (170, 16, 410, 208)
MUG_BODY = [(174, 120), (410, 120), (400, 200), (375, 245), (345, 268), (300, 280),
            (262, 268), (240, 240), (200, 200)]
MUG_HANDLE = [(188, 236), (204, 222), (258, 226), (266, 262), (240, 300), (200, 312),
              (186, 294)]


def coffee_mug(rng):
    img = Image.fromarray(skdata.coffee())

    def mug(k):
        k.ellipse(MUG_RIM, fill=255)
        k.polygon(MUG_BODY, fill=255)

    first = keep_to_mask(img.size, lambda k: (mug(k), k.polygon(MUG_HANDLE, fill=255)))
    second = keep_to_mask(img.size, mug)
    # Pixels of the handle that lie inside the body outline stay visible.
    return img, [("background except mug", first), ("background and handle", second)]


# bakery -------------------------------------------------------------------

SHELVES = (40, 60, 300, 300)
PERSON = [(360, 90, 420, 150), (340, 150, 440, 330)]
COUNTER = (300, 260, 512, 384)


def bakery(rng):
    size = (512, 384)
    img = vertical_gradient(size, (225, 205, 170), (190, 160, 120))
    d = ImageDraw.Draw(img)
    d.rectangle((0, 320, 511, 383), fill=(120, 85, 55))            # floor
    for x in range(0, 512, 32):
        d.line((x, 320, x - 40, 383), fill=(100, 70, 45), width=2)
    x0, y0, x1, y1 = SHELVES
    d.rectangle(SHELVES, fill=(110, 70, 40))
    for i in range(4):
        sy = y0 + 15 + i * 60
        d.rectangle((x0 + 8, sy, x1 - 8, sy + 45), fill=(70, 45, 25))
        d.rectangle((x0 + 4, sy + 45, x1 - 4, sy + 52), fill=(150, 105, 60))
        for j in range(6):
            bx = x0 + 18 + j * 42 + rng.uniform(-4, 4)
            tone = rng.uniform(-25, 25)
            c = (int(200 + tone), int(140 + tone), int(70 + tone / 2))
            if (i + j) % 3 == 0:
                d.ellipse((bx, sy + 20, bx + 36, sy + 45), fill=c)     # round loaf
            elif (i + j) % 3 == 1:
                d.rounded_rectangle((bx, sy + 25, bx + 38, sy + 45), 8, fill=c)
            else:
                d.ellipse((bx, sy + 28, bx + 38, sy + 44), fill=(c[0], c[1] - 15, c[2]))
                for s in range(3):
                    d.line((bx + 8 + s * 10, sy + 30, bx + 12 + s * 10, sy + 42),
                           fill=(235, 200, 140), width=2)
    head, body = PERSON
    d.rounded_rectangle(body, 30, fill=(245, 245, 245))            # apron
    d.ellipse(head, fill=(225, 180, 150))
    d.rectangle((362, 80, 418, 105), fill=(250, 250, 250))         # baker's hat
    d.rectangle(COUNTER, fill=(150, 110, 70))
    d.rectangle((300, 255, 512, 268), fill=(200, 190, 180))        # counter top
    for j in range(4):
        d.ellipse((320 + j * 45, 235, 356 + j * 45, 262), fill=(205, 150, 80))
    d.ellipse((330, 0, 390, 40), fill=(255, 240, 200))             # lamps
    d.ellipse((440, 0, 500, 40), fill=(255, 240, 200))
    d.rectangle((320, 20, 500, 30), fill=None)
    d.text((360, 45), "BAKERY", fill=(90, 50, 20))
    img = add_noise(img.filter(ImageFilter.GaussianBlur(0.6)), rng, 3)

    shelves = lambda k: k.rectangle(SHELVES, fill=255)
    first = keep_to_mask(size, shelves)

    def more(k):
        shelves(k)
        k.ellipse(head, fill=255)
        k.rectangle((362, 80, 418, 105), fill=255)
        k.rounded_rectangle(body, 30, fill=255)
        k.rectangle((300, 230, 512, 300), fill=255)               # counter with loaves
    second = keep_to_mask(size, more)
    return img, [("others except shelves", first),
                 ("others except shelves, person and interior", second)]


# cinema -------------------------------------------------------------------

SCREEN = (86, 30, 426, 190)
STAGE = (50, 190, 462, 225)
FRONT_SEATS = (40, 235, 472, 300)


def cinema(rng):
    size = (512, 384)
    img = Image.new("RGB", size, (25, 18, 20))
    d = ImageDraw.Draw(img)
    d.rectangle((0, 0, 60, 240), fill=(110, 20, 30))                # curtains
    d.rectangle((452, 0, 511, 240), fill=(110, 20, 30))
    for x in list(range(0, 60, 10)) + list(range(452, 512, 10)):
        d.line((x, 0, x, 240), fill=(80, 12, 20), width=3)
    x0, y0, x1, y1 = SCREEN
    sky = vertical_gradient((x1 - x0, y1 - y0), (90, 150, 220), (240, 200, 140))
    img.paste(sky, (x0, y0))
    d.polygon([(x0, y1), (x0 + 120, y0 + 70), (x0 + 200, y1)], fill=(60, 80, 70))
    d.polygon([(x0 + 140, y1), (x0 + 260, y0 + 50), (x1, y1)], fill=(40, 60, 55))
    d.ellipse((x1 - 80, y0 + 15, x1 - 40, y0 + 55), fill=(255, 245, 210))
    d.rectangle(STAGE, fill=(70, 45, 35))
    d.rectangle((STAGE[0], STAGE[1], STAGE[2], STAGE[1] + 4), fill=(120, 90, 60))
    for row in range(6):
        y = 240 + row * 24
        shade = 170 - row * 18
        for col in range(22):
            x = 20 + col * 22 + (row % 2) * 11 - row * 4
            d.rounded_rectangle((x, y, x + 18, y + 20), 5, fill=(shade, 25, 35))
            d.rectangle((x + 2, y + 14, x + 16, y + 20), fill=(shade - 40, 15, 25))
    for cx in (120, 260, 400):                                          # heads
        d.ellipse((cx, 300, cx + 20, 322), fill=(15, 12, 12))
    img = add_noise(img.filter(ImageFilter.GaussianBlur(0.6)), rng, 3)

    screen_stage = lambda k: (k.rectangle(SCREEN, fill=255), k.rectangle(STAGE, fill=255))
    first = keep_to_mask(size, screen_stage)
    second = keep_to_mask(size, lambda k: (screen_stage(k), k.rectangle(FRONT_SEATS, fill=255)))
    return img, [("others except screen and stage", first),
                 ("others except screen, stage and some seats", second)]


SCENES = [
    ("golden_retriever", golden_retriever, "jpg"),
    ("soccer_ball", soccer_ball, "jpg"),
    ("coffee_mug", coffee_mug, "jpg"),
    ("bakery", bakery, "jpg"),
    ("cinema", cinema, "jpg"),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "assets"))
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    (out / "corpus").mkdir(parents=True, exist_ok=True)
    (out / "masks").mkdir(parents=True, exist_ok=True)

    entries = []
    for name, make, ext in SCENES:
        rng = np.random.default_rng(SEED + len(entries))
        img, interactions = make(rng)
        image_rel = f"corpus/{name}.{ext}"
        img.convert("RGB").save(out / image_rel, quality=92)
        items = []
        for i, (label, mask) in enumerate(interactions, start=1):
            mask_rel = f"masks/{name}_{i}.png"
            assert mask.size == img.size
            mask.save(out / mask_rel, optimize=True)
            items.append({"label": label, "mask_path": mask_rel})
        entries.append({"name": name, "image_path": image_rel, "interactions": items})

    manifest = {"fill": "mean", "k": 5, "entries": entries}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main()
