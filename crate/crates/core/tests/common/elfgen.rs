// SPDX-License-Identifier: Apache-2.0

//! Minimal ELF relocatable writer for section-extraction tests.

#[derive(Debug, Clone, Copy)]
pub struct Layout {
    pub is_64: bool,
    pub big_endian: bool,
}

struct W {
    buf: Vec<u8>,
    layout: Layout,
}

impl W {
    fn u16(&mut self, v: u16) {
        let b = if self.layout.big_endian { v.to_be_bytes() } else { v.to_le_bytes() };
        self.buf.extend_from_slice(&b);
    }
    fn u32(&mut self, v: u32) {
        let b = if self.layout.big_endian { v.to_be_bytes() } else { v.to_le_bytes() };
        self.buf.extend_from_slice(&b);
    }
    fn word(&mut self, v: u64) {
        if self.layout.is_64 {
            let b = if self.layout.big_endian { v.to_be_bytes() } else { v.to_le_bytes() };
            self.buf.extend_from_slice(&b);
        } else {
            self.u32(v as u32);
        }
    }
}

/// ET_REL file with the given `(name, contents)` sections after the null
/// section, followed by `.shstrtab`.
pub fn write_elf(layout: Layout, sections: &[(String, Vec<u8>)]) -> Vec<u8> {
    let ehsize: usize = if layout.is_64 { 64 } else { 52 };
    let shentsize: usize = if layout.is_64 { 64 } else { 40 };

    let mut shstrtab = vec![0u8];
    let mut name_offsets = Vec::new();
    for (name, _) in sections.iter().map(|(n, d)| (n.as_str(), d)).chain(std::iter::once((".shstrtab", &Vec::new()))) {
        name_offsets.push(shstrtab.len() as u32);
        shstrtab.extend_from_slice(name.as_bytes());
        shstrtab.push(0);
    }

    let mut data = Vec::new();
    let mut offsets = Vec::new();
    for (_, d) in sections {
        offsets.push((ehsize + data.len()) as u64);
        data.extend_from_slice(d);
    }
    offsets.push((ehsize + data.len()) as u64);
    data.extend_from_slice(&shstrtab);
    while (ehsize + data.len()) % 8 != 0 {
        data.push(0);
    }
    let shoff = (ehsize + data.len()) as u64;
    let shnum = sections.len() + 2;

    let mut w = W { buf: Vec::new(), layout };
    w.buf.extend_from_slice(&[0x7f, b'E', b'L', b'F']);
    w.buf.push(if layout.is_64 { 2 } else { 1 });
    w.buf.push(if layout.big_endian { 2 } else { 1 });
    w.buf.push(1);
    w.buf.extend_from_slice(&[0; 9]);
    w.u16(1); // ET_REL
    w.u16(if layout.is_64 { 62 } else { 3 });
    w.u32(1);
    w.word(0); // entry
    w.word(0); // phoff
    w.word(shoff);
    w.u32(0);
    w.u16(ehsize as u16);
    w.u16(0);
    w.u16(0);
    w.u16(shentsize as u16);
    w.u16(shnum as u16);
    w.u16((shnum - 1) as u16);
    assert_eq!(w.buf.len(), ehsize);
    w.buf.extend_from_slice(&data);

    let header = |w: &mut W, name: u32, kind: u32, off: u64, size: u64| {
        w.u32(name);
        w.u32(kind);
        w.word(0); // flags
        w.word(0); // addr
        w.word(off);
        w.word(size);
        w.u32(0);
        w.u32(0);
        w.word(1);
        w.word(0);
    };
    header(&mut w, 0, 0, 0, 0);
    for (i, (_, d)) in sections.iter().enumerate() {
        header(&mut w, name_offsets[i], 1, offsets[i], d.len() as u64);
    }
    header(&mut w, name_offsets[sections.len()], 3, offsets[sections.len()], shstrtab.len() as u64);
    w.buf
}
