//! Classic libpcap reader (not pcapng).
//!
//! Layout: a 24-byte global header followed by records, each a 16-byte
//! header (`ts_sec`, `ts_usec`, `incl_len`, `orig_len`) and `incl_len` bytes
//! of frame data. Byte order is given by the magic number.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const LINKTYPE_ETHERNET: u32 = 1;

const MAGIC_USEC: u32 = 0xa1b2_c3d4;
const MAGIC_USEC_SWAPPED: u32 = 0xd4c3_b2a1;
const GLOBAL_HEADER_LEN: usize = 24;
const RECORD_HEADER_LEN: usize = 16;

const ETHERTYPE_IPV4: u16 = 0x0800;
const IPPROTO_TCP: u8 = 6;
const TCP_FLAG_SYN: u8 = 0x02;
const TCP_FLAG_ACK: u8 = 0x10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PacketRecord {
    pub ts_sec: u32,
    /// Microseconds, always below one million.
    pub ts_frac: u32,
    pub captured_len: u32,
    pub original_len: u32,
    /// IPv4/TCP segment with SYN set and ACK clear.
    pub is_tcp_syn: bool,
}

#[derive(Clone, Copy)]
enum Endian {
    Little,
    Big,
}

impl Endian {
    fn u16(self, b: &[u8]) -> u16 {
        let a = [b[0], b[1]];
        match self {
            Endian::Little => u16::from_le_bytes(a),
            Endian::Big => u16::from_be_bytes(a),
        }
    }

    fn u32(self, b: &[u8]) -> u32 {
        let a = [b[0], b[1], b[2], b[3]];
        match self {
            Endian::Little => u32::from_le_bytes(a),
            Endian::Big => u32::from_be_bytes(a),
        }
    }
}

/// Decode every record of a classic pcap capture, in file order.
pub fn parse_pcap(bytes: &[u8]) -> Result<Vec<PacketRecord>> {
    if bytes.len() < 4 {
        return Err(Error::UnrecognizedCapture);
    }
    let endian = match u32::from_le_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]) {
        MAGIC_USEC => Endian::Little,
        MAGIC_USEC_SWAPPED => Endian::Big,
        _ => return Err(Error::UnrecognizedCapture),
    };
    if bytes.len() < GLOBAL_HEADER_LEN {
        return Err(Error::TruncatedCapture(0));
    }
    // version (4), thiszone (4), sigfigs (4) are not needed
    let _version_major = endian.u16(&bytes[4..6]);
    let snaplen = endian.u32(&bytes[16..20]);
    let network = endian.u32(&bytes[20..24]);
    if network != LINKTYPE_ETHERNET {
        return Err(Error::UnsupportedLinkType(network));
    }

    let mut records = Vec::new();
    let mut offset = GLOBAL_HEADER_LEN;
    while offset < bytes.len() {
        let header = bytes
            .get(offset..offset + RECORD_HEADER_LEN)
            .ok_or(Error::TruncatedCapture(offset))?;
        let ts_sec = endian.u32(&header[0..4]);
        let ts_frac = endian.u32(&header[4..8]);
        let captured_len = endian.u32(&header[8..12]);
        let original_len = endian.u32(&header[12..16]);
        if ts_frac >= 1_000_000 {
            return Err(Error::MalformedCapture {
                offset,
                reason: "sub-second timestamp out of range",
            });
        }
        if snaplen > 0 && captured_len > snaplen {
            return Err(Error::MalformedCapture {
                offset,
                reason: "captured length exceeds snaplen",
            });
        }
        let body_start = offset + RECORD_HEADER_LEN;
        let frame = body_start
            .checked_add(captured_len as usize)
            .and_then(|end| bytes.get(body_start..end))
            .ok_or(Error::TruncatedCapture(offset))?;
        records.push(PacketRecord {
            ts_sec,
            ts_frac,
            captured_len,
            original_len,
            is_tcp_syn: is_tcp_syn(frame),
        });
        offset = body_start + captured_len as usize;
    }
    Ok(records)
}

/// Ethernet -> IPv4 -> TCP walk. Anything too short or of another protocol is not a SYN.
fn is_tcp_syn(frame: &[u8]) -> bool {
    let Some(ethertype) = frame.get(12..14) else {
        return false;
    };
    if u16::from_be_bytes([ethertype[0], ethertype[1]]) != ETHERTYPE_IPV4 {
        return false;
    }
    let ip = &frame[14..];
    let Some(&version_ihl) = ip.first() else {
        return false;
    };
    if version_ihl >> 4 != 4 {
        return false;
    }
    let ihl = usize::from(version_ihl & 0x0f) * 4;
    if ihl < 20 || ip.len() < 20 || ip[9] != IPPROTO_TCP {
        return false;
    }
    // only the first fragment carries the TCP header
    let fragment_offset = u16::from_be_bytes([ip[6], ip[7]]) & 0x1fff;
    if fragment_offset != 0 {
        return false;
    }
    match ip.get(ihl + 13) {
        Some(&flags) => flags & TCP_FLAG_SYN != 0 && flags & TCP_FLAG_ACK == 0,
        None => false,
    }
}
