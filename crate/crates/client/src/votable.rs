//! Just enough VOTable reading for the DataLink responses this testbed
//! emits: RESOURCE elements with PARAM name/value attributes.

#[derive(Debug, Clone, PartialEq)]
pub struct LinkRow {
    pub function_name: String,
    pub access_url: String,
    pub resource_identifier: String,
    pub input_params: Vec<(String, String)>,
}

fn attr(tag: &str, name: &str) -> Option<String> {
    let needle = format!("{name}=\"");
    let start = tag.find(&needle)? + needle.len();
    let end = tag[start..].find('"')? + start;
    Some(unescape(&tag[start..end]))
}

fn unescape(s: &str) -> String {
    s.replace("&quot;", "\"")
        .replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&amp;", "&")
}

pub fn parse_links(xml: &str) -> Vec<LinkRow> {
    let mut rows = Vec::new();
    let mut rest = xml;
    while let Some(start) = rest.find("<RESOURCE type=\"meta\"") {
        let Some(end) = rest[start..].find("</RESOURCE>") else { break };
        let block = &rest[start..start + end];
        rest = &rest[start + end + "</RESOURCE>".len()..];
        let open_end = block.find('>').unwrap_or(block.len());
        let function_name = attr(&block[..open_end], "ID").unwrap_or_default();
        let mut access_url = String::new();
        let mut resource_identifier = String::new();
        let mut input_params = Vec::new();
        let in_group = block.find("<GROUP").unwrap_or(block.len());
        let mut scan = block;
        while let Some(p) = scan.find("<PARAM") {
            let tag_end = scan[p..].find("/>").map(|e| p + e).unwrap_or(scan.len());
            let tag = &scan[p..tag_end];
            let name = attr(tag, "name").unwrap_or_default();
            let value = attr(tag, "value").unwrap_or_default();
            let offset = block.len() - scan.len() + p;
            match name.as_str() {
                "accessURL" => access_url = value,
                "resourceIdentifier" => resource_identifier = value,
                _ if offset > in_group => input_params.push((name, value)),
                _ => {}
            }
            scan = &scan[tag_end..];
        }
        rows.push(LinkRow { function_name, access_url, resource_identifier, input_params });
    }
    rows
}
