from django import template


register = template.Library()


@register.filter(name='svgnum')
def svgnum(value):
    """Fixed two-decimal coordinates, so identical charts give identical bytes."""
    return '%.2f' % value


@register.filter(name='svgpoints')
def svgpoints(pixels):
    return ' '.join('%.2f,%.2f' % (x, y) for x, y in pixels)
