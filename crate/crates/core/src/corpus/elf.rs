// SPDX-License-Identifier: Apache-2.0

//! Minimal ELF section-header reader, enough to pull embedded bitcode out
//! of relocatable objects.

use crate::error::{Error, Result};

pub const BITCODE_MAGIC: [u8; 4] = [0x42, 0x43, 0xC0, 0xDE];
pub const DEFAULT_SECTION_NAMES: [&str; 3] = [".llvmbc", "__LLVM,__bitcode", "__bitcode"];

const ELF_MAGIC: [u8; 4] = [0x7f, b'E', b'L', b'F'];
const ET_REL: u16 = 1;
const SHT_NOBITS: u32 = 8;

pub fn is_elf(bytes: &[u8]) -> bool {
    bytes.starts_with(&ELF_MAGIC)
}

pub fn is_bitcode(bytes: &[u8]) -> bool {
    bytes.starts_with(&BITCODE_MAGIC)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub kind: u32,
    pub offset: u64,
    pub size: u64,
}

#[derive(Debug, Clone)]
pub struct ElfFile<'a> {
    bytes: &'a [u8],
    pub is_64: bool,
    pub little_endian: bool,
    pub file_type: u16,
    pub sections: Vec<Section>,
}

struct Reader<'a> {
    bytes: &'a [u8],
    le: bool,
}

impl<'a> Reader<'a> {
    fn slice(&self, off: u64, len: usize) -> Result<&'a [u8]> {
        let start = usize::try_from(off).map_err(|_| Error::Object("offset overflow".into()))?;
        let end = start.checked_add(len).ok_or_else(|| Error::Object("offset overflow".into()))?;
        self.bytes
            .get(start..end)
            .ok_or_else(|| Error::Object(format!("read of {len} bytes at {start} is out of bounds")))
    }

    fn u16(&self, off: u64) -> Result<u16> {
        let b: [u8; 2] = self.slice(off, 2)?.try_into().unwrap();
        Ok(if self.le { u16::from_le_bytes(b) } else { u16::from_be_bytes(b) })
    }

    fn u32(&self, off: u64) -> Result<u32> {
        let b: [u8; 4] = self.slice(off, 4)?.try_into().unwrap();
        Ok(if self.le { u32::from_le_bytes(b) } else { u32::from_be_bytes(b) })
    }

    fn u64(&self, off: u64) -> Result<u64> {
        let b: [u8; 8] = self.slice(off, 8)?.try_into().unwrap();
        Ok(if self.le { u64::from_le_bytes(b) } else { u64::from_be_bytes(b) })
    }

    /// Address-sized field.
    fn word(&self, off: u64, is_64: bool) -> Result<u64> {
        if is_64 {
            self.u64(off)
        } else {
            self.u32(off).map(u64::from)
        }
    }
}

impl<'a> ElfFile<'a> {
    pub fn parse(bytes: &'a [u8]) -> Result<Self> {
        if !is_elf(bytes) {
            return Err(Error::Object("missing ELF magic".into()));
        }
        let is_64 = match bytes.get(4) {
            Some(1) => false,
            Some(2) => true,
            other => return Err(Error::Object(format!("bad ELF class {other:?}"))),
        };
        let little_endian = match bytes.get(5) {
            Some(1) => true,
            Some(2) => false,
            other => return Err(Error::Object(format!("bad ELF data encoding {other:?}"))),
        };
        let r = Reader { bytes, le: little_endian };
        let file_type = r.u16(16)?;
        let (shoff, shentsize, mut shnum, mut shstrndx) = if is_64 {
            (r.u64(0x28)?, r.u16(0x3A)?, u64::from(r.u16(0x3C)?), u32::from(r.u16(0x3E)?))
        } else {
            (u64::from(r.u32(0x20)?), r.u16(0x2E)?, u64::from(r.u16(0x30)?), u32::from(r.u16(0x32)?))
        };
        let min_entsize = if is_64 { 64 } else { 40 };
        if shoff == 0 {
            return Ok(ElfFile { bytes, is_64, little_endian, file_type, sections: vec![] });
        }
        if u64::from(shentsize) < min_entsize {
            return Err(Error::Object(format!("section header entry size {shentsize} too small")));
        }
        let header = |i: u64| shoff + i * u64::from(shentsize);
        // extended numbering stores the real counts in section 0
        if shnum == 0 {
            shnum = r.word(header(0) + if is_64 { 0x20 } else { 0x14 }, is_64)?;
        }
        if shstrndx == 0xffff {
            shstrndx = r.u32(header(0) + if is_64 { 0x2C } else { 0x1C })?;
        }
        if shnum > (bytes.len() as u64) / min_entsize {
            return Err(Error::Object(format!("implausible section count {shnum}")));
        }

        let mut raw = Vec::with_capacity(shnum as usize);
        for i in 0..shnum {
            let h = header(i);
            let name_off = r.u32(h)?;
            let kind = r.u32(h + 4)?;
            let (offset, size) = if is_64 {
                (r.u64(h + 0x18)?, r.u64(h + 0x20)?)
            } else {
                (u64::from(r.u32(h + 0x10)?), u64::from(r.u32(h + 0x14)?))
            };
            raw.push((name_off, kind, offset, size));
        }
        let strtab = match raw.get(shstrndx as usize) {
            Some(&(_, _, off, size)) => r.slice(off, size as usize)?,
            None if shnum == 0 => &[][..],
            None => return Err(Error::Object(format!("section name table index {shstrndx} out of range"))),
        };
        let sections = raw
            .into_iter()
            .map(|(name_off, kind, offset, size)| {
                let name = strtab
                    .get(name_off as usize..)
                    .map(|s| {
                        let end = s.iter().position(|&b| b == 0).unwrap_or(s.len());
                        String::from_utf8_lossy(&s[..end]).into_owned()
                    })
                    .ok_or_else(|| Error::Object(format!("section name offset {name_off} out of range")))?;
                Ok(Section { name, kind, offset, size })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ElfFile { bytes, is_64, little_endian, file_type, sections })
    }

    pub fn is_relocatable(&self) -> bool {
        self.file_type == ET_REL
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn section_data(&self, section: &Section) -> Result<&'a [u8]> {
        if section.kind == SHT_NOBITS {
            return Ok(&[]);
        }
        let r = Reader { bytes: self.bytes, le: self.little_endian };
        let len = usize::try_from(section.size).map_err(|_| Error::Object("section too large".into()))?;
        r.slice(section.offset, len)
    }
}

/// Contents of the first section in `section_names` (search order, not
/// file order) that the object contains.
pub fn extract_embedded_bitcode(object_bytes: &[u8], section_names: &[&str]) -> Result<Vec<u8>> {
    let elf = ElfFile::parse(object_bytes)?;
    let section = section_names
        .iter()
        .find_map(|n| elf.section(n))
        .ok_or_else(|| Error::NotFound(format!("no bitcode section among {section_names:?}")))?;
    let data = elf.section_data(section)?;
    if !is_bitcode(data) {
        return Err(Error::CorruptSection {
            section: section.name.clone(),
            reason: "content does not start with the bitcode magic".into(),
        });
    }
    Ok(data.to_vec())
}
